/** Screening of factor toggles against the served catalogue constraints.
 *
 * This is data-driven gatekeeping, not legal reasoning: the exclusion
 * and implication pairs come from the server's catalogue endpoint, and
 * the server re-validates every submission.
 */

import type { Catalogue } from "./types.js";

export type ToggleOutcome =
  | { ok: true; factors: string[] }
  | { ok: false; rule: string };

export function toggleFactor(
  catalogue: Catalogue,
  current: readonly string[],
  factorId: string,
): ToggleOutcome {
  const next = new Set(current);
  const turningOn = !next.has(factorId);
  if (turningOn) {
    next.add(factorId);
  } else {
    next.delete(factorId);
  }

  for (const [a, b] of catalogue.exclusions) {
    if (next.has(a) && next.has(b)) {
      return { ok: false, rule: `${a} and ${b} exclude each other` };
    }
  }
  for (const [antecedent, consequent] of catalogue.implications) {
    if (next.has(antecedent) && !next.has(consequent)) {
      return { ok: false, rule: `${antecedent} cannot be present without ${consequent}` };
    }
  }
  return { ok: true, factors: sortFactors([...next]) };
}

export function sortFactors(factors: string[]): string[] {
  const key = (fid: string) => {
    const match = /^F(\d+)[pd]$/.exec(fid);
    return match ? Number(match[1]) : Number.MAX_SAFE_INTEGER;
  };
  return [...factors].sort((a, b) => key(a) - key(b) || a.localeCompare(b));
}

export function diffFromBase(
  base: readonly string[],
  current: readonly string[],
): { add: string[]; remove: string[] } {
  const baseSet = new Set(base);
  const currentSet = new Set(current);
  return {
    add: sortFactors([...currentSet].filter((f) => !baseSet.has(f))),
    remove: sortFactors([...baseSet].filter((f) => !currentSet.has(f))),
  };
}
