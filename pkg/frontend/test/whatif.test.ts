/** The what-if flow, end to end against recorded responses: toggling
 * security measures off the bribery case flips the rendered verdict and
 * highlights the flipped nodes, with every conclusion taken verbatim
 * from the server payloads. */

import { describe, expect, it } from "vitest";

import type { WhatIfResult } from "../src/types.js";
import { corpusNetwork, fixture, flush, makeApp } from "./helpers.js";

async function selectBribed() {
  const network = corpusNetwork();
  network.on(
    (r) =>
      r.method === "POST" &&
      r.url === "/whatif" &&
      JSON.stringify((r.body as { remove?: string[] })?.remove) === JSON.stringify(["F6p"]),
    fixture("whatif_bribed_no_f6p"),
  );
  const harness = makeApp(network);
  await harness.app.start();
  await harness.app.pickCase("Bribed");
  await flush();
  return harness;
}

describe("what-if counterfactuals", () => {
  it("shows the plaintiff verdict for the unmodified case", async () => {
    const harness = await selectBribed();
    expect(harness.screens().decision).toContain("verdict-chip verdict-P");
    expect(harness.screens().decision).toContain("Plaintiff");
  });

  it("flips the rendered verdict to Defendant when F6p is toggled off", async () => {
    const harness = await selectBribed();
    harness.app.toggle("F6p");
    await harness.app.runWhatIf();

    const decision = harness.screens().decision;
    expect(decision).toContain("verdict-chip verdict-D");
    expect(decision).toContain("Defendant");
    expect(decision).toContain("whatif-tag");
  });

  it("highlights MaintainSecrecy and InfoValuable as flipped", async () => {
    const harness = await selectBribed();
    harness.app.toggle("F6p");
    await harness.app.runWhatIf();

    const decision = harness.screens().decision;
    expect(decision).toMatch(/class="node[^"]*flipped[^"]*" data-node="MaintainSecrecy"/);
    expect(decision).toMatch(/class="node[^"]*flipped[^"]*" data-node="InfoValuable"/);
    expect(decision).not.toMatch(/class="node[^"]*flipped[^"]*" data-node="MeasuresOutsiders"/);
  });

  it("derives everything from server responses, not local reasoning", async () => {
    const harness = await selectBribed();
    harness.app.toggle("F6p");
    await harness.app.runWhatIf();

    const whatIfCalls = harness.network.transcript.filter((r) => r.url === "/whatif");
    expect(whatIfCalls).toHaveLength(1);
    expect(whatIfCalls[0].body).toEqual({ case: "Bribed", add: [], remove: ["F6p"] });
    const payload = fixture<WhatIfResult>("whatif_bribed_no_f6p");
    expect(harness.app.snapshot().whatIf).toEqual(payload);
  });

  it("returns to the base decision when the toggle set matches the case again", async () => {
    const harness = await selectBribed();
    harness.app.toggle("F6p");
    await harness.app.runWhatIf();
    harness.app.toggle("F6p");
    await harness.app.runWhatIf();

    expect(harness.screens().decision).toContain("verdict-chip verdict-P");
    expect(harness.app.snapshot().whatIf).toBeNull();
  });

  it("debounces chip streams into a single request", async () => {
    const harness = await selectBribed();
    harness.app.toggle("F6p");
    harness.app.toggle("F2p");
    harness.app.toggle("F2p");
    await new Promise((resolve) => setTimeout(resolve, 400));

    const whatIfCalls = harness.network.transcript.filter((r) => r.url === "/whatif");
    expect(whatIfCalls).toHaveLength(1);
  });
});
