import { readFileSync } from "node:fs";

import type { FetchLike } from "../src/api.js";
import type { Report } from "../src/types.js";

export function loadFixtureReport(): Report {
  const raw = readFileSync(new URL("./fixtures/report.json", import.meta.url), "utf-8");
  return JSON.parse(raw) as Report;
}

export interface RecordedRequest {
  url: string;
  method: string;
}

/** A fetch stub that serves the fixture report and records every request. */
export function recordingFetch(report: Report, requests: RecordedRequest[]): FetchLike {
  return async (url, init) => {
    requests.push({ url, method: init?.method ?? "GET" });
    if (url.endsWith("/report")) {
      return new Response(JSON.stringify(report), {
        status: 200,
        headers: { "content-type": "application/json" },
      });
    }
    return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
  };
}
