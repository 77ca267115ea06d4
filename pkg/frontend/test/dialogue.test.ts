/** The dialogue panel replays the recorded SO?-chain exactly: secrecy was
 * maintained, the information was a trade secret, the trade secret was
 * misappropriated. */

import { describe, expect, it } from "vitest";

import type { MoveResult } from "../src/types.js";
import { corpusNetwork, fixture, flush, makeApp } from "./helpers.js";

async function openDialogue() {
  const network = corpusNetwork();
  network.on(
    (r) => r.method === "POST" && r.url === "/dialogue",
    fixture("dialogue_bribed_open"),
  );
  network.sequence(
    (r) => r.method === "POST" && r.url.includes("/dialogue/") && r.url.endsWith("/move"),
    [
      fixture<MoveResult>("dialogue_bribed_so1"),
      fixture<MoveResult>("dialogue_bribed_so2"),
      fixture<MoveResult>("dialogue_bribed_so3"),
    ],
  );
  const harness = makeApp(network);
  await harness.app.start();
  await harness.app.pickCase("Bribed");
  await flush();
  await harness.app.discussIssue(1);
  return harness;
}

describe("SO?/WHY? dialogue", () => {
  it("walks the worked SO chain for the bribery case", async () => {
    const harness = await openDialogue();
    await harness.app.move("SO");
    await harness.app.move("SO");
    await harness.app.move("SO");

    const statements = harness.app
      .snapshot()
      .dialogue!.transcript.filter((entry) => entry.move === "SO?")
      .map((entry) => entry.statement);
    expect(statements[0]).toMatch(/^Secrecy was Maintained/);
    expect(statements[1]).toMatch(/^The information was a Trade Secret/);
    expect(statements[2]).toMatch(/^The Trade Secret was Misappropriated/);
  });

  it("renders the transcript in order and append-only", async () => {
    const harness = await openDialogue();
    await harness.app.move("SO");
    const before = harness.screens().dialogue;
    await harness.app.move("SO");
    const after = harness.screens().dialogue;

    expect(before).toContain("Secrecy was Maintained");
    expect(after).toContain("Secrecy was Maintained");
    expect(after).toContain("The information was a Trade Secret");
    expect(after.indexOf("Secrecy was Maintained")).toBeLessThan(
      after.indexOf("The information was a Trade Secret"),
    );
  });

  it("allows at most one in-flight move", async () => {
    const harness = await openDialogue();
    const first = harness.app.move("SO");
    const second = harness.app.move("SO"); // ignored: one already in flight
    await Promise.all([first, second]);

    const soEntries = harness.app
      .snapshot()
      .dialogue!.transcript.filter((entry) => entry.move === "SO?");
    expect(soEntries).toHaveLength(1);
  });

  it("seeds the transcript with the issue statement", async () => {
    const harness = await openDialogue();
    const seed = harness.app.snapshot().dialogue!.transcript[0];
    expect(seed.move).toBe("Issue 1");
    expect(seed.statement).toContain("Whether secrecy was maintained");
  });

  it("rejects a server response that rewrites the transcript", async () => {
    const network = corpusNetwork();
    network.on((r) => r.method === "POST" && r.url === "/dialogue", fixture("dialogue_bribed_open"));
    const doctored = fixture<MoveResult>("dialogue_bribed_so1");
    doctored.transcript[0] = { move: "Issue 1", statement: "history rewritten" };
    network.sequence(
      (r) => r.url.endsWith("/move"),
      [doctored],
    );
    const harness = makeApp(network);
    await harness.app.start();
    await harness.app.pickCase("Bribed");
    await flush();
    await harness.app.discussIssue(1);
    await expect(harness.app.move("SO")).rejects.toThrow(/append-only/);
  });
});
