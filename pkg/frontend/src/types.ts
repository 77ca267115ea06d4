/** Wire types for the decision service; field names match the server. */

export type SideCode = "P" | "D";
export type VerdictCode = "accept" | "reject";

export interface CaseSummary {
  name: string;
  citation: string | null;
  outcome: string;
  factors: string[];
}

export interface CasesResponse {
  cases: CaseSummary[];
}

export interface CatalogueFactor {
  id: string;
  label: string;
  side: SideCode;
}

export interface Catalogue {
  factors: CatalogueFactor[];
  exclusions: string[][];
  implications: string[][];
}

export interface IssueInfo {
  node: string;
  plaintiff_factors: string[];
  defendant_factors: string[];
}

export interface TraceEntry {
  verdict: VerdictCode;
  rule: string;
  justification: string | null;
  children: string[];
}

export interface Decision {
  case: string;
  factors: string[];
  decision: SideCode;
  issues: IssueInfo[];
  trace: Record<string, TraceEntry>;
}

export interface PreferenceInfo {
  node: string;
  weaker: string[];
  stronger: string[];
  model: string;
  source: string;
}

export interface IracItem {
  issue: IssueInfo;
  issue_text: string;
  rule_text: string;
  application_text: string;
  conclusion_text: string;
  preference: PreferenceInfo | null;
  citation: string | null;
}

export interface Explanation {
  case: string;
  citation: string | null;
  decision: SideCode;
  factors: string[];
  items: IracItem[];
}

export interface TranscriptEntry {
  move: string;
  statement: string;
}

export interface DialogueOpened {
  session: string;
  case: string;
  issue: number;
  issues: IssueInfo[];
  focus: string;
  transcript: TranscriptEntry[];
}

export interface MoveResult {
  statement: string;
  focus: string;
  closed: boolean;
  transcript: TranscriptEntry[];
}

export interface WhatIfResult {
  before: Decision;
  after: Decision;
  flipped: string[];
}

export interface ArgumentTreeNode {
  move: string;
  actor: string;
  label: string;
  case?: string;
  factor?: string;
  counterpart?: string;
  closeness?: number;
  detail?: string;
  children: ArgumentTreeNode[];
}
