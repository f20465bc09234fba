"""CLI exit-code matrix and machine-readable output."""

import json
import threading
import time
from pathlib import Path

import jsonschema
import pytest

from oretk import cli
from oretk.fixtures import gen_adversarial, gen_jstor, write_corpus

DOCS = Path(__file__).resolve().parent.parent / "docs" / "schemas"
FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

REPORT_SCHEMA = json.loads((DOCS / "validation-report.schema.json").read_text())
CRAWL_SCHEMA = json.loads((DOCS / "crawl-result.schema.json").read_text())


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    graphs, manifest = gen_jstor("http://archive.example/jstor", 1, 1, 2, 2,
                                 citation_density=0.5, seed=3)
    write_corpus(root, "jstor", graphs, manifest)
    disconnected = gen_adversarial("disconnected")
    write_corpus(root, "disconnected", [], documents=disconnected.documents)
    return root


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidateCommand:
    def test_valid_file_exit_0(self, capsys):
        code, out, _ = run(capsys, "validate", str(FIXTURES / "fig2.rdf"))
        assert code == 0
        assert "valid: true" in out

    def test_atom_autodetected(self, capsys):
        code, out, _ = run(capsys, "validate", str(FIXTURES / "fig2.atom"))
        assert code == 0

    def test_invalid_graph_exit_1(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "validate",
                           str(corpus_dir / "disconnected" / "0.rdf"))
        assert code == 1
        assert "CONNECTED" in out

    def test_parse_failure_exit_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.rdf"
        bad.write_bytes(FIXTURES.joinpath("fig2.rdf").read_bytes() * 2)  # two roots
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 2

    def test_double_describes_exit_2(self, capsys):
        code, _, err = run(capsys, "validate",
                           str(FIXTURES / "adversarial" / "double_describes" / "0.rdf"))
        assert code == 2
        assert "AmbiguousDescribes" in err

    def test_missing_file_exit_2(self, capsys):
        code, _, _ = run(capsys, "validate", "/nonexistent/file.rdf")
        assert code == 2

    def test_json_report_matches_schema(self, capsys, corpus_dir):
        code, out, _ = run(capsys, "validate", "--json",
                           str(corpus_dir / "jstor" / "0.rdf"))
        assert code == 0
        report = json.loads(out)
        jsonschema.validate(report, REPORT_SCHEMA)
        code, out, _ = run(capsys, "validate", "--json",
                           str(corpus_dir / "disconnected" / "0.rdf"))
        assert code == 1
        jsonschema.validate(json.loads(out), REPORT_SCHEMA)

    def test_lax_level_flag(self, capsys, tmp_path):
        empty = tmp_path / "empty.rdf"
        from oretk.model import new_aggregation
        from oretk.rdfxml import to_rdfxml
        empty.write_bytes(to_rdfxml(
            new_aggregation("http://example.org/r", "http://example.org/a", []),
            check=False).data)
        assert run(capsys, "validate", str(empty))[0] == 1
        assert run(capsys, "validate", "--level", "lax", str(empty))[0] == 0


class TestConvertCommand:
    def test_golden_byte_exact(self, capsys, tmp_path):
        out_path = tmp_path / "fig2.atom"
        code, _, _ = run(capsys, "convert", str(FIXTURES / "fig2.rdf"),
                         str(out_path), "--to", "atom")
        assert code == 0
        assert out_path.read_bytes() == (FIXTURES / "fig2.atom").read_bytes()

    def test_same_format_canonicalizes(self, capsys, tmp_path):
        messy = tmp_path / "messy.rdf"
        canonical = (FIXTURES / "fig2.rdf").read_bytes()
        messy.write_bytes(canonical.replace(b"\n  ", b"\n        "))
        out_path = tmp_path / "clean.rdf"
        code, _, _ = run(capsys, "convert", str(messy), str(out_path), "--to", "rdfxml")
        assert code == 0 and out_path.read_bytes() == canonical

    def test_adversarial_exit_2(self, capsys, tmp_path):
        code, _, _ = run(capsys, "convert",
                         str(FIXTURES / "adversarial" / "double_describes" / "0.rdf"),
                         str(tmp_path / "x.atom"), "--to", "atom")
        assert code == 2

    def test_stdout_and_json_summary(self, capsys, tmp_path):
        code, out, _ = run(capsys, "convert", str(FIXTURES / "fig2.rdf"),
                           str(tmp_path / "o.atom"), "--to", "atom", "--json")
        assert code == 0
        summary = json.loads(out)
        assert summary["format"] == "atom" and summary["bytes"] > 0


class TestServeAndCrawl:
    def test_serve_then_crawl_reproduces_manifest(self, capsys, corpus_dir, tmp_path):
        stop = threading.Event()
        # run serve with a private stop event by calling the command function
        from oretk.cli import _build_parser, _cmd_serve
        args = _build_parser().parse_args(
            ["serve", str(corpus_dir / "jstor"), "--port", "0", "--json"])
        result = {}

        def run_serve():
            result["code"] = _cmd_serve(args, stop_event=stop)

        thread = threading.Thread(target=run_serve, daemon=True)
        thread.start()
        time.sleep(0.3)
        out = capsys.readouterr().out
        base = json.loads(out)["serving"]

        manifest = json.loads((corpus_dir / "jstor" / "manifest.json").read_text())
        seed = manifest["agg_uris"][0]
        out_file = tmp_path / "crawl.json"
        code = cli.main(["crawl", seed, "--depth", "4", "--via", base,
                         "--out", str(out_file), "--json"])
        crawl_out = capsys.readouterr().out
        assert code == 0
        payload = json.loads(out_file.read_text())
        jsonschema.validate(payload, CRAWL_SCHEMA)
        assert json.loads(crawl_out) == payload
        assert len(payload["nodes"]) == manifest["expected_crawl_nodes"]

        stop.set()
        thread.join(timeout=5)
        assert result["code"] == 0

    def test_unreachable_seed_exit_3(self, capsys):
        code, _, err = run(capsys, "crawl", "http://127.0.0.1:1/nothing",
                           "--depth", "0")
        assert code == 3

    def test_bad_port_exit_4(self, capsys, corpus_dir):
        code, _, err = run(capsys, "serve", str(corpus_dir / "jstor"),
                           "--port", "not-a-port")
        assert code == 4
        code, _, _ = run(capsys, "serve", str(corpus_dir / "jstor"),
                         "--port", "99999")
        assert code == 4

    def test_bind_failure_exit_3(self, capsys, corpus_dir):
        from oretk.service import ServiceStore, serve as raw_serve
        handle = raw_serve(ServiceStore(), "127.0.0.1", 0)
        try:
            port = handle.url.rsplit(":", 1)[1]
            code, _, err = run(capsys, "serve", str(corpus_dir / "jstor"),
                               "--port", port)
            assert code == 3
        finally:
            handle.stop()


class TestUsageErrors:
    def test_unknown_subcommand_exit_4(self, capsys):
        assert run(capsys, "frobnicate")[0] == 4

    def test_unknown_flag_exit_4(self, capsys):
        assert run(capsys, "validate", "--bogus", "x")[0] == 4

    def test_unknown_follow_relation_exit_4(self, capsys):
        code, _, err = run(capsys, "crawl", "http://example.org/a",
                           "--follow", "sideways")
        assert code == 4

    def test_bad_config_line_exit_4(self, capsys, corpus_dir, tmp_path):
        config = tmp_path / "svc.conf"
        config.write_text("this is not key value\n")
        code, _, _ = run(capsys, "serve", str(corpus_dir / "jstor"),
                         "--config", str(config))
        assert code == 4


class TestFixtureCommand:
    def test_jstor_fixture_json_manifest(self, capsys, tmp_path):
        code, out, _ = run(capsys, "fixture", "jstor", str(tmp_path),
                           "--journals", "1", "--issues", "1",
                           "--articles", "1", "--pages", "2", "--json")
        assert code == 0
        manifest = json.loads(out)["jstor"]
        assert manifest["expected_crawl_nodes"] == 1 + 1 + 1 + 2
        assert (tmp_path / "jstor" / "manifest.json").exists()

    def test_adversarial_all_kinds(self, capsys, tmp_path):
        code, _, _ = run(capsys, "fixture", "adversarial", str(tmp_path))
        assert code == 0
        for kind in ("cycle", "disconnected", "double_describes", "redirect_loop"):
            assert (tmp_path / "adversarial" / kind).is_dir()

    def test_config_file_used_when_flags_absent(self, capsys, corpus_dir, tmp_path):
        config = tmp_path / "svc.conf"
        config.write_text("port=not-a-port  # flags win when given\n")
        code, _, _ = run(capsys, "serve", str(corpus_dir / "jstor"),
                         "--config", str(config))
        assert code == 4  # config port is bad and no flag overrides it
