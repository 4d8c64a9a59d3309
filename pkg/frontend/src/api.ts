/**
 * Client for the suggestion service's /suggest endpoint.
 *
 * One request is in flight per client at a time: issuing a new query aborts
 * the pending one, so the view always renders the answer of the latest
 * submission (last-write-wins).
 */

export interface Suggestion {
  text: string;
  score: number;
  sources: string[];
}

export interface SuggestResponse {
  query: string;
  suggestions: Suggestion[];
}

/** The service knows nothing about this query (store-only mode). */
export class NoSnapshotsError extends Error {
  constructor(query: string) {
    super(`no snapshots for query: ${query}`);
    this.name = "NoSnapshotsError";
  }
}

/** Transport failure or a non-OK status other than 404. */
export class ServiceError extends Error {
  readonly status: number | null;
  constructor(message: string, status: number | null = null) {
    super(message);
    this.name = "ServiceError";
    this.status = status;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class SuggestClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private controller: AbortController | null = null;

  constructor(baseUrl: string, fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl;
  }

  suggestUrl(query: string, limit: number): string {
    const params = new URLSearchParams({ q: query, n: String(limit) });
    return `${this.baseUrl}/suggest?${params.toString()}`;
  }

  /**
   * Fetch suggestions for a query, aborting any request still in flight.
   * Rejects with DOMException(AbortError) when superseded, NoSnapshotsError
   * on 404, ServiceError otherwise.
   */
  async suggest(query: string, limit = 10): Promise<SuggestResponse> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;

    let response: Response;
    try {
      response = await this.fetchImpl(this.suggestUrl(query, limit), {
        signal: controller.signal,
      });
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") {
        throw error;
      }
      throw new ServiceError(`service unreachable: ${String(error)}`);
    }
    if (response.status === 404) {
      throw new NoSnapshotsError(query);
    }
    if (!response.ok) {
      throw new ServiceError(`service answered HTTP ${response.status}`, response.status);
    }
    return (await response.json()) as SuggestResponse;
  }
}
