/** Pure renderers: view state in, HTML strings out.
 *
 * Keeping these free of fetches and DOM reads means any screen can be
 * re-created in a test from recorded server responses alone.
 */

import {
  activeDecision,
  flippedNodes,
  type ViewState,
} from "./state.js";
import type { ArgumentTreeNode, Decision, IssueInfo } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function sideOf(state: ViewState, factorId: string): string {
  const entry = state.catalogue?.factors.find((f) => f.id === factorId);
  return entry ? entry.side : factorId.endsWith("p") ? "P" : "D";
}

function labelOf(state: ViewState, factorId: string): string {
  const entry = state.catalogue?.factors.find((f) => f.id === factorId);
  return entry ? entry.label : factorId;
}

export function verdictText(code: "P" | "D"): string {
  return code === "P" ? "Plaintiff" : "Defendant";
}

export function renderCaseList(state: ViewState): string {
  const rows = state.cases
    .map((c) => {
      const selected = c.name === state.selected ? " selected" : "";
      return (
        `<li class="case-row${selected}" data-case="${escapeHtml(c.name)}">` +
        `<button class="case-pick" data-case="${escapeHtml(c.name)}">${escapeHtml(c.name)}</button>` +
        `<span class="outcome outcome-${c.outcome === "?" ? "open" : c.outcome}">${escapeHtml(c.outcome)}</span>` +
        `</li>`
      );
    })
    .join("");
  return `<ul class="case-list">${rows}</ul>`;
}

export function renderFactorChips(state: ViewState): string {
  if (!state.selected) {
    return `<p class="hint">Pick a case to inspect its factors.</p>`;
  }
  const active = new Set(state.toggledFactors);
  const universe = state.catalogue
    ? state.catalogue.factors.map((f) => f.id)
    : state.baseFactors;
  const chips = universe
    .map((fid) => {
      const onClass = active.has(fid) ? " on" : "";
      const baseline = state.baseFactors.includes(fid) !== active.has(fid) ? " delta" : "";
      return (
        `<button class="chip side-${sideOf(state, fid)}${onClass}${baseline}" ` +
        `data-factor="${fid}" title="${escapeHtml(labelOf(state, fid))}">${fid}</button>`
      );
    })
    .join("");
  const notice = state.notice
    ? `<p class="notice" role="alert">${escapeHtml(state.notice)}</p>`
    : "";
  return `<div class="chips">${chips}</div>${notice}`;
}

function renderNodeLine(
  state: ViewState,
  decision: Decision,
  node: string,
  depth: number,
  issues: Set<string>,
  flipped: Set<string>,
): string {
  const entry = decision.trace[node];
  if (!entry) {
    return "";
  }
  const classes = ["node", `verdict-${entry.verdict}`];
  if (issues.has(node)) {
    classes.push("issue");
  }
  if (flipped.has(node)) {
    classes.push("flipped");
  }
  const children = (entry.children ?? []).filter((child) => child in decision.trace);
  const childHtml = children
    .map((child) => renderNodeLine(state, decision, child, depth + 1, issues, flipped))
    .join("");
  return (
    `<li class="${classes.join(" ")}" data-node="${escapeHtml(node)}" ` +
    `title="${escapeHtml(entry.rule)}">` +
    `<span class="node-name">${escapeHtml(node)}</span>` +
    `<span class="node-verdict">${entry.verdict}</span>` +
    (childHtml ? `<ul class="outline">${childHtml}</ul>` : "") +
    `</li>`
  );
}

export function renderDecisionPanel(state: ViewState): string {
  const decision = activeDecision(state);
  if (!decision) {
    return `<p class="hint">No decision yet.</p>`;
  }
  const issues = new Set(decision.issues.map((issue: IssueInfo) => issue.node));
  const flipped = new Set(flippedNodes(state));
  const root = Object.keys(decision.trace).find(
    (node) => !Object.values(decision.trace).some((entry) => entry.children?.includes(node)),
  );
  const outline = root
    ? `<ul class="outline root">${renderNodeLine(state, decision, root, 0, issues, flipped)}</ul>`
    : "";
  const verdict =
    `<p class="verdict-line">Verdict: ` +
    `<span class="verdict-chip verdict-${decision.decision}">${verdictText(decision.decision)}</span>` +
    (state.whatIf ? ` <span class="whatif-tag">what-if</span>` : "") +
    `</p>`;
  const issueList = decision.issues.length
    ? `<p class="issue-line">Issues: ${decision.issues
        .map((issue) => `<span class="issue-name">${escapeHtml(issue.node)}</span>`)
        .join(", ")}</p>`
    : `<p class="issue-line">No contested issues.</p>`;
  return verdict + issueList + outline;
}

export function renderIracPanel(state: ViewState): string {
  if (!state.explanation) {
    return `<p class="hint">No explanation yet.</p>`;
  }
  const cards = state.explanation.items
    .map((item, index) => {
      const citation = item.citation
        ? `<cite class="citation">${escapeHtml(item.citation)}</cite>`
        : "";
      return (
        `<article class="irac-card" data-issue-index="${index + 1}">` +
        `<h4>Issue ${index + 1}: ${escapeHtml(item.issue.node)}</h4>` +
        `<p>${escapeHtml(item.issue_text)}</p>` +
        `<p>${escapeHtml(item.rule_text)}</p>` +
        `<p>${escapeHtml(item.application_text)}</p>` +
        `<p><strong>${escapeHtml(item.conclusion_text)}</strong></p>` +
        citation +
        `<button class="dialogue-open" data-issue="${index + 1}">Discuss (SO?/WHY?)</button>` +
        `</article>`
      );
    })
    .join("");
  return cards || `<p class="hint">No contested issues to explain.</p>`;
}

export function renderDialoguePanel(state: ViewState): string {
  const dialogue = state.dialogue;
  if (!dialogue) {
    return `<p class="hint">Open a dialogue from an issue card.</p>`;
  }
  const lines = dialogue.transcript
    .map((entry) => {
      const statement = entry.statement
        ? `<span class="statement">${escapeHtml(entry.statement)}</span>`
        : "";
      return `<li><span class="move">${escapeHtml(entry.move)}</span> ${statement}</li>`;
    })
    .join("");
  const decision = activeDecision(state);
  const focusChildren =
    decision?.trace[dialogue.focus]?.children?.filter((child) => child in decision.trace) ?? [];
  const picker = focusChildren.length
    ? `<select class="why-child"><option value="">WHY: first relevant child</option>` +
      focusChildren
        .map((child) => `<option value="${escapeHtml(child)}">${escapeHtml(child)}</option>`)
        .join("") +
      `</select>`
    : "";
  const disabled = dialogue.closed || state.moveInFlight ? " disabled" : "";
  return (
    `<ol class="transcript">${lines}</ol>` +
    `<div class="dialogue-controls">` +
    `<button class="move-so"${disabled}>SO?</button>` +
    `<button class="move-why"${disabled}>WHY?</button>` +
    picker +
    `<button class="move-ok"${disabled}>OK</button>` +
    `</div>` +
    (dialogue.closed ? `<p class="hint">Dialogue closed.</p>` : "")
  );
}

function collectLabels(tree: ArgumentTreeNode, into: Set<string>): Set<string> {
  into.add(tree.label);
  for (const child of tree.children) {
    collectLabels(child, into);
  }
  return into;
}

function describeArgument(node: ArgumentTreeNode): string {
  switch (node.move) {
    case "cite":
      return `cite ${node.case}`;
    case "counterexample":
      return `counterexample ${node.case}`;
    case "distinguish-precedent-extra":
      return `distinguish: ${node.factor} present in the precedent only`;
    case "distinguish-new-case-extra":
      return `distinguish: ${node.factor} present in the new case only`;
    case "substitute":
      return `substitute ${node.factor} for ${node.counterpart} (closeness ${node.closeness})`;
    case "cancel":
      return `cancel ${node.counterpart} with ${node.factor} (closeness ${node.closeness})`;
    case "transform":
      return node.detail === "substitute"
        ? `transform: substitute ${node.factor} for ${node.counterpart}`
        : `transform: cancel ${node.counterpart} with ${node.factor}`;
    default:
      return `distinguish counterexample: ${node.factor} differs`;
  }
}

export function renderArgumentPanel(state: ViewState): string {
  if (!state.fullTree || !state.prunedTree) {
    return `<p class="hint">No argument tree yet.</p>`;
  }
  const kept = collectLabels(state.prunedTree, new Set<string>());

  const renderNode = (node: ArgumentTreeNode): string => {
    const dimmed = state.issuesOn && !kept.has(node.label) ? " pruned" : "";
    const children = node.children.map(renderNode).join("");
    return (
      `<li class="arg-node${dimmed}" data-label="${escapeHtml(node.label)}">` +
      `<span class="arg-label">${escapeHtml(node.label)}</span> ` +
      `<span class="arg-text">${escapeHtml(describeArgument(node))}</span>` +
      (children ? `<ul>${children}</ul>` : "") +
      `</li>`
    );
  };

  const toggle =
    `<label class="issues-toggle"><input type="checkbox" class="issues-switch"` +
    `${state.issuesOn ? " checked" : ""}/> prune to spotted issues</label>`;
  return toggle + `<ul class="arg-tree">${renderNode(state.fullTree)}</ul>`;
}

export function renderApp(state: ViewState): Record<string, string> {
  return {
    cases: renderCaseList(state),
    factors: renderFactorChips(state),
    decision: renderDecisionPanel(state),
    irac: renderIracPanel(state),
    dialogue: renderDialoguePanel(state),
    argument: renderArgumentPanel(state),
  };
}
