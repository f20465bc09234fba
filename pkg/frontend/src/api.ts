// Same-origin access to the toolkit service. Read-only by design: the
// explorer only ever issues GETs.

import type { CrawlResultJson } from "./model.js";

/** Fetch one aggregation's resource map as a depth-0 crawl result. */
export async function fetchExpansion(aggUri: string): Promise<CrawlResultJson> {
  const url = `/api/crawl?seed=${encodeURIComponent(aggUri)}&depth=0`;
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`expansion failed: ${response.status}`);
  }
  return (await response.json()) as CrawlResultJson;
}

/** Where a resource map (possibly foreign-authority) is served locally. */
export function localUrl(uri: string): string {
  const here = window.location;
  try {
    const parsed = new URL(uri);
    if (parsed.host === here.host && !parsed.hash) return uri;
  } catch {
    /* fall through to the mirror form */
  }
  return `/mirror/${encodeURIComponent(uri)}`;
}
