/** Browser wiring: event delegation over the rendered panels.
 *
 * At most one dialogue move is in flight at a time; what-if re-decisions
 * are debounced so chip-clicking streams do not flood the server.
 */

import { ApiClient, ApiError } from "./api.js";
import { renderApp } from "./render.js";
import {
  applyMove,
  beginMove,
  clearWhatIf,
  failMove,
  initialState,
  openDialogue,
  selectCase,
  withCorpus,
  withIssuesToggle,
  withNotice,
  withToggles,
  withTrees,
  withWhatIf,
  type ViewState,
} from "./state.js";
import { diffFromBase, toggleFactor } from "./toggles.js";

const WHATIF_DEBOUNCE_MS = 250;

export class App {
  private state: ViewState = initialState();
  private whatIfTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly mount: (panels: Record<string, string>) => void,
  ) {}

  snapshot(): ViewState {
    return this.state;
  }

  private commit(state: ViewState): void {
    this.state = state;
    this.mount(renderApp(state));
  }

  async start(): Promise<void> {
    const [cases, catalogue] = await Promise.all([
      this.api.listCases(),
      this.api.getCatalogue(),
    ]);
    this.commit(withCorpus(this.state, cases.cases, catalogue));
  }

  async pickCase(name: string): Promise<void> {
    const summary = this.state.cases.find((c) => c.name === name);
    if (!summary) {
      return;
    }
    const [decision, explanation] = await Promise.all([
      this.api.decide({ case: name }),
      this.api.explain({ case: name }),
    ]);
    this.commit(selectCase(this.state, summary, decision, explanation));
    void this.loadTrees(name);
  }

  private async loadTrees(name: string): Promise<void> {
    try {
      const [full, pruned] = await Promise.all([
        this.api.argue(name, false),
        this.api.argue(name, true),
      ]);
      if (this.state.selected === name) {
        this.commit(withTrees(this.state, full, pruned));
      }
    } catch (error) {
      if (!(error instanceof ApiError)) {
        throw error;
      }
      // A case with no citable precedent simply has no argument panel.
    }
  }

  toggle(factorId: string): void {
    if (!this.state.catalogue || !this.state.selected) {
      return;
    }
    const outcome = toggleFactor(this.state.catalogue, this.state.toggledFactors, factorId);
    if (!outcome.ok) {
      this.commit(withNotice(this.state, `Blocked: ${outcome.rule}`));
      return;
    }
    this.commit(withToggles(this.state, outcome.factors));
    this.scheduleWhatIf();
  }

  private scheduleWhatIf(): void {
    if (this.whatIfTimer !== null) {
      clearTimeout(this.whatIfTimer);
    }
    this.whatIfTimer = setTimeout(() => {
      this.whatIfTimer = null;
      void this.runWhatIf();
    }, WHATIF_DEBOUNCE_MS);
  }

  async runWhatIf(): Promise<void> {
    if (this.whatIfTimer !== null) {
      clearTimeout(this.whatIfTimer);
      this.whatIfTimer = null;
    }
    const name = this.state.selected;
    if (!name) {
      return;
    }
    const { add, remove } = diffFromBase(this.state.baseFactors, this.state.toggledFactors);
    if (!add.length && !remove.length) {
      this.commit(clearWhatIf(this.state));
      return;
    }
    try {
      const result = await this.api.whatIf({ case: name, add, remove });
      if (this.state.selected === name) {
        this.commit(withWhatIf(this.state, result));
      }
    } catch (error) {
      if (error instanceof ApiError) {
        this.commit(withNotice(this.state, `Rejected by the server: ${JSON.stringify(error.detail)}`));
        return;
      }
      throw error;
    }
  }

  async discussIssue(issue: number): Promise<void> {
    const name = this.state.selected;
    if (!name) {
      return;
    }
    const opened = await this.api.openDialogue({ case: name, issue });
    this.commit(openDialogue(this.state, opened));
  }

  async move(move: "SO" | "WHY" | "OK", child?: string): Promise<void> {
    const dialogue = this.state.dialogue;
    if (!dialogue || dialogue.closed || this.state.moveInFlight) {
      return;
    }
    this.commit(beginMove(this.state));
    try {
      const result = await this.api.move(dialogue.session, move, child);
      this.commit(applyMove(this.state, result));
    } catch (error) {
      if (error instanceof ApiError) {
        this.commit(failMove(this.state, `Move rejected: ${JSON.stringify(error.detail)}`));
        return;
      }
      throw error;
    }
  }

  setIssuesToggle(issuesOn: boolean): void {
    this.commit(withIssuesToggle(this.state, issuesOn));
  }
}

export function bootstrap(document: Document, baseUrl: string = ""): App {
  const panels: Record<string, HTMLElement> = {};
  for (const id of ["cases", "factors", "decision", "irac", "dialogue", "argument"]) {
    const element = document.getElementById(`panel-${id}`);
    if (!element) {
      throw new Error(`missing panel element panel-${id}`);
    }
    panels[id] = element;
  }
  const app = new App(new ApiClient(baseUrl), (rendered) => {
    for (const [key, html] of Object.entries(rendered)) {
      panels[key].innerHTML = html;
    }
  });

  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches(".case-pick")) {
      void app.pickCase(target.dataset.case ?? "");
    } else if (target.matches(".chip")) {
      app.toggle(target.dataset.factor ?? "");
    } else if (target.matches(".dialogue-open")) {
      void app.discussIssue(Number(target.dataset.issue ?? "1"));
    } else if (target.matches(".move-so")) {
      void app.move("SO");
    } else if (target.matches(".move-why")) {
      const picker = document.querySelector<HTMLSelectElement>(".why-child");
      void app.move("WHY", picker?.value || undefined);
    } else if (target.matches(".move-ok")) {
      void app.move("OK");
    }
  });
  document.addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    if (target.matches(".issues-switch")) {
      app.setIssuesToggle((target as HTMLInputElement).checked);
    }
  });

  void app.start();
  return app;
}
