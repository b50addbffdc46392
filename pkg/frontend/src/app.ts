// Session cockpit.  Everything the page shows comes from wire payloads:
// the client never computes tour lengths, gaps or probabilities, it only
// formats what the service sent (single source of truth).

import { ApiClient, ControlBody, FetchLike, LiveStream, SocketCtor } from "./client.js";
import {
  MaskState,
  buildUpdate,
  describeUpdate,
  maskFromSteering,
  nodeName,
  rowSum,
  setPercent,
  toggleBlock,
  validateMask,
} from "./mask.js";
import { Point, circleLayout, nearestNode, project } from "./projection.js";
import { Context2DLike, View, render } from "./render.js";
import type { InstanceInfo, IterationEvent, Snapshot, SteeringUpdate, WireFrame } from "./types.js";

export interface AppOptions {
  baseUrl: string;
  fetchFn: FetchLike;
  socketCtor: SocketCtor;
  contextFor(canvas: HTMLCanvasElement): Context2DLike;
}

const CANVAS_W = 720;
const CANVAS_H = 520;
const PAD = 30;

const PAGE = `
  <div class="toolbar">
    <select id="instance-select"></select>
    <label>ants <input id="ants" type="number" min="1" placeholder="30"></label>
    <label>iterations <input id="iterations" type="number" min="1" placeholder="250"></label>
    <label>seed <input id="seed" type="number" min="0" placeholder="0"></label>
    <button id="new-session">New session</button>
  </div>
  <div class="controls">
    <label>HIF <input id="hif-slider" type="range" min="0" max="1" step="0.01" value="0" disabled>
      <span id="hif-value">0</span></label>
    <button id="start" disabled>Start</button>
    <button id="pause" disabled>Pause</button>
    <button id="resume" disabled>Resume</button>
    <button id="compare" disabled title="finish the run before comparing">Compare</button>
  </div>
  <div id="status" class="status">no session</div>
  <div id="banner" class="banner" hidden></div>
  <div class="layout">
    <canvas id="canvas" width="${CANVAS_W}" height="${CANVAS_H}"></canvas>
    <div class="side">
      <div id="points" class="points"></div>
      <div id="mask" class="mask" hidden></div>
      <div class="changes">
        <h3>Human changes</h3>
        <ul id="changes"></ul>
      </div>
      <ul id="activity" class="activity"></ul>
    </div>
  </div>
`;

interface StatusView {
  status: string;
  iteration: number;
  total: number;
  bestLength: number | null;
  gapPercent: number | null;
}

export class App {
  readonly client: ApiClient;
  stream: LiveStream | null = null;
  sessionId: string | null = null;
  snapshot: Snapshot | null = null;
  ackVersions: number[] = [];

  private instances: InstanceInfo[] = [];
  private meta = new Map<string, InstanceInfo>();
  private points: Point[] = [];
  private labels: string[] = [];
  private mask: MaskState | null = null;
  private pendingDescs: string[] = [];
  private view: StatusView = { status: "", iteration: 0, total: 0, bestLength: null, gapPercent: null };
  private snapSeq = 0;
  private ctx: Context2DLike;

  private readonly el: {
    select: HTMLSelectElement;
    ants: HTMLInputElement;
    iterations: HTMLInputElement;
    seed: HTMLInputElement;
    newSession: HTMLButtonElement;
    hif: HTMLInputElement;
    hifValue: HTMLElement;
    start: HTMLButtonElement;
    pause: HTMLButtonElement;
    resume: HTMLButtonElement;
    compare: HTMLButtonElement;
    status: HTMLElement;
    banner: HTMLElement;
    canvas: HTMLCanvasElement;
    points: HTMLElement;
    mask: HTMLElement;
    changes: HTMLElement;
    activity: HTMLElement;
  };

  constructor(
    private root: HTMLElement,
    private opts: AppOptions,
  ) {
    this.client = new ApiClient(opts.baseUrl, opts.fetchFn);
    root.innerHTML = PAGE;
    const q = <T extends HTMLElement>(sel: string) => root.querySelector(sel) as T;
    this.el = {
      select: q("#instance-select"),
      ants: q("#ants"),
      iterations: q("#iterations"),
      seed: q("#seed"),
      newSession: q("#new-session"),
      hif: q("#hif-slider"),
      hifValue: q("#hif-value"),
      start: q("#start"),
      pause: q("#pause"),
      resume: q("#resume"),
      compare: q("#compare"),
      status: q("#status"),
      banner: q("#banner"),
      canvas: q("#canvas"),
      points: q("#points"),
      mask: q("#mask"),
      changes: q("#changes"),
      activity: q("#activity"),
    };
    this.ctx = opts.contextFor(this.el.canvas);

    this.el.newSession.addEventListener("click", () => void this.newSession());
    this.el.hif.addEventListener("input", () => {
      this.el.hifValue.textContent = this.el.hif.value;
    });
    this.el.hif.addEventListener("change", () => {
      this.sendSteering({ hif: Number(this.el.hif.value) });
    });
    this.el.start.addEventListener("click", () => this.sendControl({ action: "start" }));
    this.el.pause.addEventListener("click", () => this.sendControl({ action: "pause", wait: false }));
    this.el.resume.addEventListener("click", () => this.sendControl({ action: "resume" }));
    this.el.compare.addEventListener("click", () => void this.compare());
    this.el.canvas.addEventListener("click", (ev) => this.onCanvasClick(ev as MouseEvent));
  }

  async init(): Promise<void> {
    this.instances = await this.client.listInstances();
    this.meta = new Map(this.instances.map((it) => [it.name, it]));
    this.el.select.innerHTML = this.instances
      .map((it) => `<option value="${it.name}">${it.name} (${it.dimension})</option>`)
      .join("");
  }

  async newSession(): Promise<void> {
    this.stream?.close();
    const params: Record<string, unknown> = {};
    if (this.el.ants.value) params.ants = Number(this.el.ants.value);
    if (this.el.iterations.value) params.iterations = Number(this.el.iterations.value);
    if (this.el.seed.value) params.seed = Number(this.el.seed.value);
    let created;
    try {
      created = await this.client.createSession({
        instance_ref: this.el.select.value,
        params,
      });
    } catch (err) {
      this.showBanner(err);
      return;
    }
    this.sessionId = created.session_id;
    this.snapshot = null;
    this.ackVersions = [];
    this.pendingDescs = [];
    this.mask = null;
    this.el.mask.hidden = true;
    this.el.changes.innerHTML = "";
    this.el.changes.dataset.acks = "[]";
    this.el.activity.innerHTML = "";
    this.el.banner.hidden = true;
    this.subscribe();
  }

  private subscribe(): void {
    if (this.sessionId === null) return;
    this.stream = new LiveStream(this.client.liveUrl(this.sessionId), this.opts.socketCtor, {
      onFrame: (frame) => this.onFrame(frame),
      onGap: () => void this.refreshSnapshot(),
      onClose: () => this.updateControls(),
    });
  }

  // -- wire frame handling --------------------------------------------------

  private onFrame(frame: WireFrame): void {
    switch (frame.kind) {
      case "SNAPSHOT":
        this.snapSeq += 1;
        this.applySnapshot(frame.payload as unknown as Snapshot);
        break;
      case "EVENT":
        this.applyEvent(frame.payload);
        break;
      case "STEERING_ACK":
        this.applyAck(frame.payload.version as number);
        break;
      case "ERROR":
        this.showBanner(new Error(String(frame.payload.error)));
        break;
    }
    this.root.dispatchEvent(new CustomEvent("antsteer:frame", { detail: frame }));
  }

  private async refreshSnapshot(): Promise<void> {
    if (this.sessionId === null) return;
    const ticket = ++this.snapSeq;
    try {
      const snap = await this.client.snapshot(this.sessionId);
      // drop the response when a newer snapshot was applied meanwhile
      if (ticket === this.snapSeq) this.applySnapshot(snap);
    } catch (err) {
      this.showBanner(err);
    }
  }

  private applySnapshot(snap: Snapshot): void {
    const firstForSession = this.snapshot === null;
    this.snapshot = snap;
    this.view = {
      status: snap.status,
      iteration: snap.iteration,
      total: snap.total_iterations,
      bestLength: snap.best.length,
      gapPercent: snap.gap_percent,
    };
    if (firstForSession) {
      this.layout(snap);
      this.buildPointList(snap.instance.dimension);
    }
    this.el.hif.value = String(snap.steering.hif);
    this.el.hifValue.textContent = String(snap.steering.hif);
    this.updateStatusBar();
    this.updateControls();
    this.draw();
  }

  private applyEvent(payload: Record<string, unknown>): void {
    if (typeof payload.type === "string") {
      // aux events (fallback, infeasible) go to the activity log
      const li = document.createElement("li");
      li.textContent = `${payload.type} at iteration ${payload.iteration}`;
      this.el.activity.appendChild(li);
      return;
    }
    const ev = payload as unknown as IterationEvent;
    this.view.status = "RUNNING"; // events only flow while the engine runs
    this.view.iteration = ev.iteration;
    this.view.bestLength = ev.best_length;
    this.updateStatusBar();
    this.updateControls();
    if (ev.improved) void this.refreshSnapshot(); // pull the new best order
  }

  private applyAck(version: number): void {
    this.ackVersions.push(version);
    const desc = this.pendingDescs.shift() ?? "";
    const li = document.createElement("li");
    li.dataset.version = String(version);
    li.textContent = `v${version}  ${desc}`;
    this.el.changes.appendChild(li);
    this.el.changes.dataset.acks = JSON.stringify(this.ackVersions);
    const saved = this.el.mask.querySelector("#mask-saved");
    if (saved) saved.textContent = `v${version} acknowledged`;
    void this.refreshSnapshot(); // overlay renders from the served state
  }

  // -- controls --------------------------------------------------------------

  private sendControl(body: ControlBody): void {
    if (this.stream === null || !this.stream.open) {
      this.showBanner(new Error("no live stream"));
      return;
    }
    try {
      this.stream.send(body);
    } catch (err) {
      this.showBanner(err);
    }
  }

  private sendSteering(update: SteeringUpdate): void {
    const n = this.snapshot?.instance.dimension ?? 0;
    this.pendingDescs.push(describeUpdate(update, n));
    if (this.stream === null || !this.stream.open) {
      this.pendingDescs.pop();
      this.showBanner(new Error("no live stream"));
      return;
    }
    try {
      this.stream.send({ action: "steering_update", update });
    } catch (err) {
      this.pendingDescs.pop();
      this.showBanner(err);
    }
  }

  private async compare(): Promise<void> {
    if (this.sessionId === null) return;
    // the stream closes at FINISHED, so comparison goes over HTTP
    try {
      await this.client.control(this.sessionId, { action: "compare" });
      await this.refreshSnapshot();
    } catch (err) {
      this.showBanner(err);
    }
  }

  private updateControls(): void {
    const st = this.view.status;
    const live = this.stream !== null && this.stream.open;
    this.el.start.disabled = !(st === "CREATED" && live);
    this.el.pause.disabled = !(st === "RUNNING" && live);
    this.el.resume.disabled = !(st === "PAUSED" && live);
    this.el.compare.disabled = st !== "FINISHED";
    this.el.hif.disabled = !(live && st !== "FINISHED");
  }

  private updateStatusBar(): void {
    const v = this.view;
    const gap = v.gapPercent;
    let text = `${v.status}  iteration ${v.iteration}/${v.total}`;
    if (v.bestLength !== null) text += `  best ${v.bestLength}`;
    if (gap !== null) text += `  gap ${gap.toFixed(3)}%`;
    this.el.status.textContent = text;
    this.el.status.dataset.status = v.status;
    this.el.status.dataset.iteration = String(v.iteration);
    this.el.status.dataset.best = v.bestLength === null ? "" : String(v.bestLength);
    this.el.status.dataset.gapPercent = gap === null ? "" : String(gap);
  }

  private showBanner(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.el.banner.textContent = message;
    this.el.banner.hidden = false;
  }

  // -- layout and drawing ----------------------------------------------------

  private layout(snap: Snapshot): void {
    const n = snap.instance.dimension;
    const coords = snap.instance.coordinates;
    if (coords === null) {
      this.points = circleLayout(n, CANVAS_W, CANVAS_H, PAD);
    } else {
      const geo = this.meta.get(snap.instance.name)?.edge_weight_type === "GEO";
      this.points = project(coords, geo, CANVAS_W, CANVAS_H, PAD);
    }
    this.labels = Array.from({ length: n }, (_, i) => nodeName(i, n));
  }

  private buildPointList(n: number): void {
    this.el.points.innerHTML = Array.from(
      { length: n },
      (_, i) => `<button class="point-btn" data-node="${i}">${nodeName(i, n)}</button>`,
    ).join("");
    for (const btn of this.el.points.querySelectorAll("button")) {
      btn.addEventListener("click", () => this.openMask(Number((btn as HTMLElement).dataset.node)));
    }
  }

  private onCanvasClick(ev: MouseEvent): void {
    const rect = this.el.canvas.getBoundingClientRect();
    const x = ev.clientX - rect.left;
    const y = ev.clientY - rect.top;
    const hit = nearestNode(this.points, x, y, 12);
    if (hit >= 0) this.openMask(hit);
  }

  private draw(): void {
    if (this.snapshot === null) return;
    const view: View = {
      width: CANVAS_W,
      height: CANVAS_H,
      points: this.points,
      labels: this.labels,
      pheromone: this.snapshot.pheromone,
      bestOrder: this.snapshot.best.order.length > 0 ? this.snapshot.best.order : null,
      optimalOrder: this.snapshot.optimum?.order ?? null,
      steering: this.snapshot.steering,
      selected: this.mask?.row ?? -1,
    };
    render(this.ctx, view);
  }

  // -- edit mask ---------------------------------------------------------------

  openMask(row: number): void {
    if (this.snapshot === null) return;
    const n = this.snapshot.instance.dimension;
    this.mask = maskFromSteering(row, n, this.snapshot.steering);
    const targets = Array.from({ length: n }, (_, j) => j).filter((j) => j !== row);
    const rows = targets
      .map((j) => {
        const pct = this.mask!.percents.get(j) ?? 0;
        const blocked = this.mask!.blocked.has(j);
        return `<div class="mask-row">
          <span class="mask-label">${nodeName(j, n)}</span>
          <input class="him-input" data-to="${j}" type="number" min="0" max="100" step="1" value="${pct}"> %
          <button class="block-btn" data-to="${j}">${blocked ? "Unblock" : "Block"}</button>
        </div>`;
      })
      .join("");
    this.el.mask.innerHTML = `
      <h3>Point ${nodeName(row, n)}</h3>
      <div id="mask-note" ${this.view.status === "RUNNING" ? "" : "hidden"}>applies at the next iteration</div>
      ${rows}
      <div id="mask-sum"></div>
      <div id="mask-error" class="error" hidden></div>
      <button id="mask-save">Save</button>
      <span id="mask-saved"></span>
    `;
    this.el.mask.hidden = false;
    this.el.mask.dataset.node = String(row);
    for (const input of this.el.mask.querySelectorAll<HTMLInputElement>("input.him-input")) {
      input.addEventListener("input", () => {
        setPercent(this.mask!, Number(input.dataset.to), Number(input.value || "0"));
        this.refreshMaskValidation();
      });
    }
    for (const btn of this.el.mask.querySelectorAll<HTMLButtonElement>("button.block-btn")) {
      btn.addEventListener("click", () => {
        const nowBlocked = toggleBlock(this.mask!, Number(btn.dataset.to));
        btn.textContent = nowBlocked ? "Unblock" : "Block";
        this.refreshMaskValidation();
      });
    }
    (this.el.mask.querySelector("#mask-save") as HTMLButtonElement).addEventListener("click", () => {
      this.saveMask();
    });
    this.refreshMaskValidation();
    this.draw();
  }

  private refreshMaskValidation(): void {
    if (this.mask === null) return;
    const sumEl = this.el.mask.querySelector("#mask-sum") as HTMLElement;
    const errEl = this.el.mask.querySelector("#mask-error") as HTMLElement;
    const saveBtn = this.el.mask.querySelector("#mask-save") as HTMLButtonElement;
    const sum = rowSum(this.mask);
    sumEl.textContent = `sum ${+sum.toFixed(6)}%`;
    sumEl.dataset.sum = String(sum);
    const error = validateMask(this.mask);
    if (error === null) {
      errEl.hidden = true;
      errEl.textContent = "";
      saveBtn.disabled = false;
    } else {
      errEl.hidden = false;
      errEl.textContent = error;
      saveBtn.disabled = true;
    }
  }

  private saveMask(): void {
    if (this.mask === null) return;
    if (validateMask(this.mask) !== null) return; // Save stays disabled anyway
    const update = buildUpdate(this.mask);
    if (Object.keys(update).length === 0) return;
    this.sendSteering(update);
    // rebase so a second save from the same panel sends a fresh delta
    this.mask.basePercents = new Map(this.mask.percents);
    this.mask.baseBlocked = new Set(this.mask.blocked);
  }
}
