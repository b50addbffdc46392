// Browser entry point: mount the app against the page's own fetch,
// WebSocket and canvas context.  The service origin defaults to the page
// origin and can be overridden with ?api=http://host:port.

import { App } from "./app.js";
import type { Context2DLike } from "./render.js";
import type { SocketCtor } from "./client.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? window.location.origin;

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app root element");

const app = new App(root, {
  baseUrl,
  fetchFn: (url, init) => window.fetch(url, init),
  socketCtor: WebSocket as unknown as SocketCtor,
  contextFor: (canvas) => canvas.getContext("2d") as unknown as Context2DLike,
});

void app.init();
