// Read-only client for the report service. The viewer never mutates
// anything, so the only verb here is GET; concurrent requests for the
// same path share one in-flight promise.

import type { Report } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
    this.name = "ApiError";
  }
}

export class ReportApi {
  private inFlight = new Map<string, Promise<unknown>>();

  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  getJson<T>(path: string): Promise<T> {
    const pending = this.inFlight.get(path);
    if (pending) {
      return pending as Promise<T>;
    }
    const request = this.request<T>(path).finally(() => this.inFlight.delete(path));
    this.inFlight.set(path, request);
    return request;
  }

  private async request<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, { method: "GET" });
    } catch (err) {
      throw new ApiError(`report service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(`GET ${path} failed with ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  fetchReport(): Promise<Report> {
    return this.getJson<Report>("/report");
  }
}
