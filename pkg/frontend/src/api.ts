/** Thin typed client; every legal conclusion shown in the UI comes from here. */

import type {
  ArgumentTreeNode,
  CasesResponse,
  CaseSummary,
  Catalogue,
  Decision,
  DialogueOpened,
  Explanation,
  MoveResult,
  WhatIfResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    throw new ApiError(response.status, body && (body as { detail?: unknown }).detail);
  }
  return body as T;
}

function post(payload: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  };
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  listCases(): Promise<CasesResponse> {
    return request(`${this.baseUrl}/cases`);
  }

  getCase(name: string): Promise<CaseSummary> {
    return request(`${this.baseUrl}/cases/${encodeURIComponent(name)}`);
  }

  getCatalogue(): Promise<Catalogue> {
    return request(`${this.baseUrl}/catalogue`);
  }

  decide(body: { case?: string; factors?: string[] }): Promise<Decision> {
    return request(`${this.baseUrl}/decide`, post(body));
  }

  explain(body: { case?: string; factors?: string[]; model?: string }): Promise<Explanation> {
    return request(`${this.baseUrl}/explain`, post(body));
  }

  whatIf(body: { case: string; add: string[]; remove: string[] }): Promise<WhatIfResult> {
    return request(`${this.baseUrl}/whatif`, post(body));
  }

  openDialogue(body: { case?: string; factors?: string[]; issue?: number }): Promise<DialogueOpened> {
    return request(`${this.baseUrl}/dialogue`, post(body));
  }

  move(session: string, move: string, child?: string): Promise<MoveResult> {
    return request(
      `${this.baseUrl}/dialogue/${encodeURIComponent(session)}/move`,
      post(child ? { move, child } : { move }),
    );
  }

  argue(name: string, issuesOn: boolean, side: string = "P"): Promise<ArgumentTreeNode> {
    const qs = new URLSearchParams({ issues: issuesOn ? "on" : "off", side });
    return request(`${this.baseUrl}/argue/${encodeURIComponent(name)}?${qs}`);
  }
}
