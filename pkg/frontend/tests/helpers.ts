// Shared DOM-driving helpers for the scripted tests.

import type { WireFrame } from "../src/types.js";

export function waitFrame(
  root: HTMLElement,
  pred: (frame: WireFrame) => boolean,
  timeoutMs = 30_000,
  label = "frame",
): Promise<WireFrame> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => {
      root.removeEventListener("antsteer:frame", handler);
      reject(new Error(`timed out waiting for ${label}`));
    }, timeoutMs);
    const handler = (ev: Event) => {
      const frame = (ev as CustomEvent).detail as WireFrame;
      if (pred(frame)) {
        clearTimeout(timer);
        root.removeEventListener("antsteer:frame", handler);
        resolve(frame);
      }
    };
    root.addEventListener("antsteer:frame", handler);
  });
}

export async function pollUntil(
  pred: () => boolean,
  timeoutMs = 30_000,
  label = "condition",
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!pred()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${label}`);
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

export function click(root: HTMLElement, selector: string): void {
  const el = root.querySelector(selector) as HTMLElement | null;
  if (el === null) throw new Error(`no element matches ${selector}`);
  el.click();
}

export function setInput(root: HTMLElement, selector: string, value: string): void {
  const el = root.querySelector(selector) as HTMLInputElement | null;
  if (el === null) throw new Error(`no element matches ${selector}`);
  el.value = value;
  el.dispatchEvent(new Event("input", { bubbles: true }));
}

// Types a percentage into the open edit mask's row for one target node.
export function setMaskInput(root: HTMLElement, target: number, value: string): void {
  setInput(root, `#mask input.him-input[data-to="${target}"]`, value);
}

export function statusData(root: HTMLElement): DOMStringMap {
  return (root.querySelector("#status") as HTMLElement).dataset;
}
