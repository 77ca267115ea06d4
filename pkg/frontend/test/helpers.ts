/** Test scaffolding: fixtures recorded from the live service, and a fake
 * network that replays them while logging every request. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, `${name}.json`), "utf8")) as T;
}

export interface RecordedRequest {
  method: string;
  url: string;
  body: unknown;
}

type Responder = (request: RecordedRequest) => { status?: number; payload: unknown } | undefined;

export class FakeNetwork {
  readonly transcript: RecordedRequest[] = [];
  private readonly responders: Responder[] = [];

  on(matcher: (request: RecordedRequest) => boolean, payload: unknown, status = 200): this {
    this.responders.push((request) => (matcher(request) ? { status, payload } : undefined));
    return this;
  }

  route(method: string, url: string, payload: unknown, status = 200): this {
    return this.on((request) => request.method === method && request.url === url, payload, status);
  }

  /** Serves the payloads one after another; repeats the last one. */
  sequence(matcher: (request: RecordedRequest) => boolean, payloads: unknown[]): this {
    let index = 0;
    this.responders.push((request) => {
      if (!matcher(request)) {
        return undefined;
      }
      const payload = payloads[Math.min(index, payloads.length - 1)];
      index += 1;
      return { status: 200, payload };
    });
    return this;
  }

  install(): void {
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = typeof input === "string" ? input : input.toString();
      const request: RecordedRequest = {
        method: init?.method ?? "GET",
        url,
        body: init?.body ? JSON.parse(init.body as string) : null,
      };
      this.transcript.push(request);
      for (const responder of this.responders) {
        const match = responder(request);
        if (match) {
          return new Response(JSON.stringify(match.payload), {
            status: match.status ?? 200,
            headers: { "content-type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ detail: { error: `no fixture for ${url}` } }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }) as typeof fetch;
  }
}

export interface Harness {
  app: App;
  network: FakeNetwork;
  screens: () => Record<string, string>;
}

/** An app instance whose every byte of legal content comes from the
 * recorded responses wired into the fake network. */
export function makeApp(network: FakeNetwork): Harness {
  network.install();
  let panels: Record<string, string> = {};
  const app = new App(new ApiClient(""), (rendered) => {
    panels = rendered;
  });
  return { app, network, screens: () => panels };
}

export function corpusNetwork(): FakeNetwork {
  const network = new FakeNetwork();
  network.route("GET", "/cases", fixture("cases"));
  network.route("GET", "/catalogue", fixture("catalogue"));
  network.on(
    (r) => r.method === "POST" && r.url === "/decide" && (r.body as { case?: string })?.case === "Bribed",
    fixture("decide_bribed"),
  );
  network.on(
    (r) => r.method === "POST" && r.url === "/explain" && (r.body as { case?: string })?.case === "Bribed",
    fixture("explain_bribed"),
  );
  network.route("GET", "/argue/Bribed?issues=off&side=P", fixture("argue_bribed_off"));
  network.route("GET", "/argue/Bribed?issues=on&side=P", fixture("argue_bribed_on"));
  return network;
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
