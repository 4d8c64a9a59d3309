/**
 * End-to-end check against a running suggestion service. Skipped unless
 * SERVICE_URL points at one, e.g.:
 *
 *   tasksugg serve --store ../fixtures/store --topics ../fixtures/topics.json --port 8080 &
 *   SERVICE_URL=http://127.0.0.1:8080 npx vitest run tests/integration.test.ts
 */

import { describe, expect, it } from "vitest";

import { SuggestClient } from "../src/api.js";
import { SearchApp } from "../src/app.js";

const SERVICE_URL = process.env.SERVICE_URL;

describe.skipIf(!SERVICE_URL)("against the live service", () => {
  it("renders the fixture's top suggestions in server order within 1s", async () => {
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const pushes: unknown[] = [];
    const app = new SearchApp(root, new SuggestClient(SERVICE_URL!), {
      historyApi: { pushState: (...args: unknown[]) => pushes.push(args) },
    });

    const started = performance.now();
    await app.submit("low wedding budget");
    const elapsed = performance.now() - started;

    const chips = Array.from(root.querySelectorAll(".chip")).map(
      (el) => el.textContent,
    );
    const served = await new SuggestClient(SERVICE_URL!).suggest(
      "low wedding budget",
      10,
    );
    expect(chips).toEqual(served.suggestions.map((s) => s.text));
    expect(chips).toContain("cheap wedding cake");
    expect(chips).not.toContain("low wedding budget");
    expect(pushes).toHaveLength(1);
    expect(elapsed).toBeLessThan(1000);
  });

  it("chip clicks issue a fresh request with the chip text", async () => {
    const root = document.createElement("div");
    document.body.replaceChildren(root);
    const pushes: unknown[] = [];
    const app = new SearchApp(root, new SuggestClient(SERVICE_URL!), {
      historyApi: { pushState: (...args: unknown[]) => pushes.push(args) },
    });
    await app.submit("low wedding budget");
    const chip = root.querySelector<HTMLButtonElement>(".chip")!;
    const chipText = chip.textContent!;
    chip.click();
    await new Promise((resolve) => setTimeout(resolve, 500));
    const input = root.querySelector<HTMLInputElement>(".search-input")!;
    expect(input.value).toBe(chipText);
    expect(pushes).toHaveLength(2);
  });
});
