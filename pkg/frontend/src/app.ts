/**
 * The search view: an input box plus clickable suggestion chips.
 *
 * Chips render strictly in server order (the service owns the ranking).
 * Selecting a chip replaces the query, pushes a history entry, and
 * re-queries, so the user can drill into one aspect of the task and come
 * back with the browser's back button.
 */

import {
  NoSnapshotsError,
  Suggestion,
  SuggestClient,
  SuggestResponse,
} from "./api.js";

export interface AppOptions {
  limit?: number;
  historyApi?: Pick<History, "pushState">;
  normalize?: (raw: string) => string;
}

const normalizeDefault = (raw: string) => raw.toLowerCase().split(/\s+/).filter(Boolean).join(" ");

export class SearchApp {
  readonly root: HTMLElement;
  private readonly client: SuggestClient;
  private readonly limit: number;
  private readonly history: Pick<History, "pushState">;
  private readonly normalize: (raw: string) => string;

  private input!: HTMLInputElement;
  private status!: HTMLElement;
  private chips!: HTMLElement;
  private currentQuery = "";

  constructor(root: HTMLElement, client: SuggestClient, options: AppOptions = {}) {
    this.root = root;
    this.client = client;
    this.limit = options.limit ?? 10;
    this.history = options.historyApi ?? window.history;
    this.normalize = options.normalize ?? normalizeDefault;
    this.render();
  }

  private render(): void {
    this.root.innerHTML = `
      <form class="search-form">
        <input type="search" class="search-input" placeholder="Search a task..." autofocus>
        <button type="submit" class="search-button">Search</button>
      </form>
      <p class="status" role="status"></p>
      <ul class="chips" aria-label="query suggestions"></ul>
    `;
    this.input = this.root.querySelector<HTMLInputElement>(".search-input")!;
    this.status = this.root.querySelector<HTMLElement>(".status")!;
    this.chips = this.root.querySelector<HTMLElement>(".chips")!;
    this.root.querySelector<HTMLFormElement>(".search-form")!.addEventListener(
      "submit",
      (event) => {
        event.preventDefault();
        void this.submit(this.input.value);
      },
    );
  }

  /** Handle a user-initiated submission (validates, pushes history). */
  async submit(rawQuery: string): Promise<void> {
    const query = rawQuery.trim();
    if (!query) {
      this.setStatus("Type a query first.");
      return;
    }
    this.history.pushState({ q: query }, "", `?q=${encodeURIComponent(query)}`);
    await this.runQuery(query);
  }

  /** Re-render an earlier query (history navigation; no new entry). */
  async restore(query: string): Promise<void> {
    if (query.trim()) {
      await this.runQuery(query.trim());
    }
  }

  private async runQuery(query: string): Promise<void> {
    this.currentQuery = query;
    this.input.value = query;
    this.setStatus("Loading suggestions...");
    this.chips.replaceChildren();
    let response: SuggestResponse;
    try {
      response = await this.client.suggest(query, this.limit);
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") {
        return; // a newer submission took over
      }
      if (error instanceof NoSnapshotsError) {
        this.setStatus("No suggestions available for this query.");
        return;
      }
      this.renderRetry(query);
      return;
    }
    if (this.currentQuery !== query) {
      return; // stale answer
    }
    this.renderChips(query, response.suggestions);
  }

  private renderChips(query: string, suggestions: Suggestion[]): void {
    // The service never suggests the query itself; assert it client-side.
    const queryKey = this.normalize(query);
    const visible = suggestions.filter((s) => {
      if (this.normalize(s.text) === queryKey) {
        console.warn("service echoed the query itself; dropping chip", s.text);
        return false;
      }
      return true;
    });
    this.chips.replaceChildren(
      ...visible.map((suggestion) => this.chip(suggestion)),
    );
    this.setStatus(
      visible.length
        ? `${visible.length} suggestion${visible.length === 1 ? "" : "s"}`
        : "No suggestions survived for this query.",
    );
  }

  private chip(suggestion: Suggestion): HTMLElement {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.type = "button";
    button.className = "chip";
    button.textContent = suggestion.text;
    button.title = suggestion.sources.length
      ? `sources: ${suggestion.sources.join(", ")}`
      : "sources: unknown";
    button.addEventListener("click", () => {
      void this.submit(suggestion.text);
    });
    item.appendChild(button);
    return item;
  }

  private renderRetry(query: string): void {
    this.setStatus("Could not reach the suggestion service. ");
    const retry = document.createElement("button");
    retry.type = "button";
    retry.className = "retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      void this.runQuery(query);
    });
    this.status.appendChild(retry);
  }

  private setStatus(text: string): void {
    this.status.textContent = text;
  }
}

/** Wire the app into the page, including history navigation. */
export function mount(root: HTMLElement, client: SuggestClient, options: AppOptions = {}): SearchApp {
  const app = new SearchApp(root, client, options);
  window.addEventListener("popstate", (event) => {
    const state = event.state as { q?: string } | null;
    const query = state?.q ?? new URLSearchParams(window.location.search).get("q") ?? "";
    void app.restore(query);
  });
  const initial = new URLSearchParams(window.location.search).get("q");
  if (initial) {
    void app.restore(initial);
  }
  return app;
}
