/** View state and its pure transitions.
 *
 * The UI performs no legal reasoning: every verdict, issue, statement,
 * and tree in this state arrived verbatim from the server, so any
 * screen is reproducible from a recorded response transcript.
 */

import type {
  ArgumentTreeNode,
  CaseSummary,
  Catalogue,
  Decision,
  DialogueOpened,
  Explanation,
  MoveResult,
  TranscriptEntry,
  WhatIfResult,
} from "./types.js";

export interface DialogueView {
  session: string;
  issue: number;
  focus: string;
  closed: boolean;
  transcript: TranscriptEntry[];
}

export interface ViewState {
  cases: CaseSummary[];
  catalogue: Catalogue | null;
  selected: string | null;
  baseFactors: string[];
  toggledFactors: string[];
  decision: Decision | null;
  whatIf: WhatIfResult | null;
  explanation: Explanation | null;
  dialogue: DialogueView | null;
  fullTree: ArgumentTreeNode | null;
  prunedTree: ArgumentTreeNode | null;
  issuesOn: boolean;
  moveInFlight: boolean;
  notice: string | null;
}

export function initialState(): ViewState {
  return {
    cases: [],
    catalogue: null,
    selected: null,
    baseFactors: [],
    toggledFactors: [],
    decision: null,
    whatIf: null,
    explanation: null,
    dialogue: null,
    fullTree: null,
    prunedTree: null,
    issuesOn: true,
    moveInFlight: false,
    notice: null,
  };
}

export function withCorpus(state: ViewState, cases: CaseSummary[], catalogue: Catalogue): ViewState {
  return { ...state, cases, catalogue };
}

export function selectCase(
  state: ViewState,
  summary: CaseSummary,
  decision: Decision,
  explanation: Explanation,
): ViewState {
  return {
    ...state,
    selected: summary.name,
    baseFactors: [...summary.factors],
    toggledFactors: [...summary.factors],
    decision,
    whatIf: null,
    explanation,
    dialogue: null,
    fullTree: null,
    prunedTree: null,
    notice: null,
  };
}

export function withToggles(state: ViewState, factors: string[]): ViewState {
  return { ...state, toggledFactors: factors, notice: null };
}

export function withWhatIf(state: ViewState, result: WhatIfResult): ViewState {
  return { ...state, whatIf: result, notice: null };
}

export function clearWhatIf(state: ViewState): ViewState {
  return { ...state, whatIf: null, toggledFactors: [...state.baseFactors] };
}

export function withNotice(state: ViewState, notice: string): ViewState {
  return { ...state, notice };
}

export function openDialogue(state: ViewState, opened: DialogueOpened): ViewState {
  return {
    ...state,
    dialogue: {
      session: opened.session,
      issue: opened.issue,
      focus: opened.focus,
      closed: false,
      transcript: [...opened.transcript],
    },
  };
}

/** Transcripts only ever grow; a server response that would rewrite
 * history is rejected. */
export function applyMove(state: ViewState, result: MoveResult): ViewState {
  const dialogue = state.dialogue;
  if (!dialogue) {
    throw new Error("no dialogue in progress");
  }
  const previous = dialogue.transcript;
  for (let i = 0; i < previous.length; i += 1) {
    const next = result.transcript[i];
    if (
      !next ||
      next.move !== previous[i].move ||
      next.statement !== previous[i].statement
    ) {
      throw new Error("transcript is append-only; server response rewrote history");
    }
  }
  return {
    ...state,
    moveInFlight: false,
    dialogue: {
      ...dialogue,
      focus: result.focus,
      closed: result.closed,
      transcript: [...result.transcript],
    },
  };
}

export function beginMove(state: ViewState): ViewState {
  if (state.moveInFlight) {
    throw new Error("a dialogue move is already in flight");
  }
  return { ...state, moveInFlight: true };
}

export function failMove(state: ViewState, notice: string): ViewState {
  return { ...state, moveInFlight: false, notice };
}

export function withTrees(
  state: ViewState,
  fullTree: ArgumentTreeNode,
  prunedTree: ArgumentTreeNode,
): ViewState {
  return { ...state, fullTree, prunedTree };
}

export function withIssuesToggle(state: ViewState, issuesOn: boolean): ViewState {
  return { ...state, issuesOn };
}

/** The verdict currently on screen: the live what-if result when factor
 * toggles diverge from the base case, otherwise the base decision. */
export function activeDecision(state: ViewState): Decision | null {
  if (state.whatIf) {
    return state.whatIf.after;
  }
  return state.decision;
}

export function flippedNodes(state: ViewState): string[] {
  return state.whatIf ? state.whatIf.flipped : [];
}
