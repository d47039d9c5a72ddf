import type { Envelope, PendingKind, PendingPage, Report } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class OfflineError extends Error {}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch {
      throw new OfflineError(`service unreachable at ${this.baseUrl}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  pending(kind: PendingKind, page = 1, pageSize = 50): Promise<PendingPage> {
    const query = new URLSearchParams({
      kind,
      page: String(page),
      page_size: String(pageSize),
    });
    return this.request<PendingPage>(`/api/pending?${query}`);
  }

  decide(id: string, verdict: string, version?: number): Promise<Envelope> {
    return this.request<Envelope>("/api/decision", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(version === undefined ? { id, verdict } : { id, verdict, version }),
    });
  }

  report(name: string): Promise<Report> {
    return this.request<Report>(`/api/reports/${name}`);
  }

  async reportBytes(name: string): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/reports/${name}`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
