// Integration against a real annotation service: drives the UI's state
// machine and HTTP client end to end, across a hard service restart.
import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { saveSelected, sessionFromDetail, setDraft } from "../src/state.js";
import type { LabelValue } from "../src/types.js";

const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8711 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;

let workdir: string;
let server: ChildProcess | null = null;

function makeFixture(dir: string): void {
  const script = `
import sys
from sentalign.corpus import save_annotations, save_corpus
from sentalign.synthetic import SyntheticConfig, generate_corpus

out = sys.argv[1]
pairs, records = generate_corpus(SyntheticConfig(n_pairs=3, seed=17))
save_corpus(pairs, out + "/corpus.jsonl")
save_annotations(records[:5], out + "/predictions.jsonl")
`;
  writeFileSync(join(dir, "make_fixture.py"), script);
  execFileSync(PYTHON, [join(dir, "make_fixture.py"), dir]);
}

function startServer(dir: string): ChildProcess {
  const child = spawn(PYTHON, [
    "-m", "sentalign.cli", "serve",
    "--corpus", join(dir, "corpus.jsonl"),
    "--predictions", join(dir, "predictions.jsonl"),
    "--state", join(dir, "state.jsonl"),
    "--port", String(PORT),
    "--static", join(__dirname, "..", "static"),
  ], { stdio: "ignore" });
  return child;
}

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/api/pairs`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

async function stopServer(): Promise<void> {
  if (!server) return;
  const child = server;
  server = null;
  child.kill("SIGKILL");
  await new Promise((resolve) => child.once("exit", resolve));
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "annotation-ui-"));
  makeFixture(workdir);
  server = startServer(workdir);
  await waitForServer();
}, 60000);

afterAll(async () => {
  await stopServer();
});

describe("annotation round-trip against a live service", () => {
  const written: { pairId: string; simpleSent: number; complexSent: number; label: LabelValue }[] = [];

  it("labels 10 candidates through the UI state machine", async () => {
    const client = new ApiClient(BASE);
    const summaries = await client.listPairs();
    expect(summaries.length).toBeGreaterThan(0);
    const cycle: LabelValue[] = ["aligned", "partial", "not_aligned"];
    let labeled = 0;
    for (const summary of summaries) {
      if (labeled >= 10) break;
      const session = sessionFromDetail(await client.getPair(summary.pair_id));
      for (let index = 0; index < session.candidates.length && labeled < 10; index++) {
        session.selected = index;
        const label = cycle[labeled % cycle.length];
        setDraft(session, label);
        expect(await saveSelected(session, client)).toBe(true);
        const candidate = session.candidates[index];
        expect(candidate.saveState).toBe("saved");
        expect(candidate.humanLabel).toBe(label);
        written.push({
          pairId: summary.pair_id,
          simpleSent: candidate.simpleSent,
          complexSent: candidate.complexSent,
          label,
        });
        labeled += 1;
      }
    }
    expect(labeled).toBe(10);
  }, 30000);

  it("all 10 labels survive a hard restart, with source=human", async () => {
    await stopServer();
    server = startServer(workdir);
    await waitForServer();
    const client = new ApiClient(BASE);
    for (const record of written) {
      const detail = await client.getPair(record.pairId);
      const found = detail.candidates.find(
        (c) => c.simple_sent === record.simpleSent && c.complex_sent === record.complexSent,
      );
      expect(found, `candidate ${JSON.stringify(record)}`).toBeDefined();
      expect(found!.human_label).toBe(record.label);
    }
  }, 60000);

  it("the exported file passes the annotation-file validator", async () => {
    const client = new ApiClient(BASE);
    const text = await client.exportAnnotations();
    const exportPath = join(workdir, "export.jsonl");
    writeFileSync(exportPath, text);
    const merged = execFileSync(PYTHON, ["-c", `
import sys
from sentalign.corpus import validate_annotation_file
print(validate_annotation_file(sys.argv[1]))
`, exportPath]).toString().trim();
    expect(Number(merged)).toBeGreaterThanOrEqual(10);
    const humanLines = text.trim().split("\n")
      .map((line) => JSON.parse(line))
      .filter((record) => record.source === "human");
    expect(humanLines.length).toBeGreaterThanOrEqual(10);
  }, 30000);

  it("serves the built UI at the root", async () => {
    const resp = await fetch(`${BASE}/`);
    expect(resp.status).toBe(200);
    const html = await resp.text();
    expect(html).toContain("sentence alignment review");
  });
});
