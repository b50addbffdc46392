// Thin transport layer: HTTP requests for request/response calls and the
// live WebSocket stream with sequence-gap detection.  Constructors take
// the fetch function and WebSocket class so tests can run under Node.

import type { InstanceInfo, ResultDoc, Snapshot, SteeringUpdate, WireFrame } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface ControlBody {
  action: "start" | "pause" | "resume" | "steering_update" | "compare";
  wait?: boolean;
  force?: boolean;
  update?: SteeringUpdate;
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const message = (body as { error?: string }).error ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, message);
    }
    return body;
  }

  private post(path: string, body: unknown): Promise<unknown> {
    return this.request(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async listInstances(): Promise<InstanceInfo[]> {
    const doc = (await this.request("/instances")) as { instances: InstanceInfo[] };
    return doc.instances;
  }

  createSession(body: {
    instance_ref?: string;
    tsplib?: string;
    params?: Record<string, unknown>;
    hif?: number;
  }): Promise<{ session_id: string; status: string }> {
    return this.post("/sessions", body) as Promise<{ session_id: string; status: string }>;
  }

  snapshot(sessionId: string): Promise<Snapshot> {
    return this.request(`/sessions/${sessionId}`) as Promise<Snapshot>;
  }

  result(sessionId: string): Promise<ResultDoc> {
    return this.request(`/sessions/${sessionId}/result`) as Promise<ResultDoc>;
  }

  control(sessionId: string, body: ControlBody): Promise<Record<string, unknown>> {
    return this.post(`/sessions/${sessionId}/control`, body) as Promise<Record<string, unknown>>;
  }

  liveUrl(sessionId: string): string {
    return this.baseUrl.replace(/^http/, "ws") + `/sessions/${sessionId}/live`;
  }
}

// Browser-compatible subset of the WebSocket API; the ws package under
// Node satisfies it too.
export interface SocketLike {
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: unknown) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  send(data: string): void;
  close(): void;
  readyState: number;
}

export type SocketCtor = new (url: string) => SocketLike;

export interface StreamHandlers {
  onFrame(frame: WireFrame): void;
  // Called on a sequence skip before onFrame; the app should refetch a
  // snapshot because intermediate frames are gone for good.
  onGap?(expected: number, got: number): void;
  onClose?(): void;
}

export class LiveStream {
  private socket: SocketLike;
  private expected = 0;
  closed = false;

  constructor(url: string, socketCtor: SocketCtor, handlers: StreamHandlers) {
    this.socket = new socketCtor(url);
    this.socket.onmessage = (ev) => {
      const text = typeof ev.data === "string" ? ev.data : String(ev.data);
      const frame = JSON.parse(text) as WireFrame;
      if (frame.sequence !== this.expected && handlers.onGap) {
        handlers.onGap(this.expected, frame.sequence);
      }
      this.expected = frame.sequence + 1;
      handlers.onFrame(frame);
    };
    this.socket.onclose = () => {
      this.closed = true;
      handlers.onClose?.();
    };
    this.socket.onerror = () => {
      // close follows; nothing to do here
    };
  }

  get open(): boolean {
    return !this.closed && this.socket.readyState === 1;
  }

  whenOpen(): Promise<void> {
    if (this.socket.readyState === 1) return Promise.resolve();
    return new Promise((resolve, reject) => {
      this.socket.onopen = () => resolve();
      const prevClose = this.socket.onclose;
      this.socket.onclose = (ev) => {
        prevClose?.(ev);
        reject(new Error("stream closed before opening"));
      };
    });
  }

  send(frame: ControlBody): void {
    if (!this.open) throw new Error("stream is not open");
    this.socket.send(JSON.stringify(frame));
  }

  close(): void {
    this.closed = true;
    this.socket.close();
  }
}
