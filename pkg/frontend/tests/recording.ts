// Recording stand-in for a 2D canvas context.  happy-dom has no real
// canvas, so tests assert against the recorded draw calls instead.

import type { Context2DLike } from "../src/render.js";

export interface RecordedStroke {
  style: string;
  width: number;
  alpha: number;
  dash: number[];
  points: [number, number][];
  closed: boolean;
}

export interface RecordedFill {
  style: string;
  rect: [number, number, number, number];
}

export class RecordingContext implements Context2DLike {
  strokeStyle = "";
  fillStyle = "";
  lineWidth = 1;
  globalAlpha = 1;
  font = "";

  strokes: RecordedStroke[] = [];
  fills: RecordedFill[] = [];
  texts: string[] = [];
  clears = 0;

  private path: [number, number][] = [];
  private closed = false;
  private dash: number[] = [];

  clearRect(_x: number, _y: number, _w: number, _h: number): void {
    this.clears += 1;
  }

  beginPath(): void {
    this.path = [];
    this.closed = false;
  }

  moveTo(x: number, y: number): void {
    this.path.push([x, y]);
  }

  lineTo(x: number, y: number): void {
    this.path.push([x, y]);
  }

  closePath(): void {
    this.closed = true;
  }

  stroke(): void {
    this.strokes.push({
      style: this.strokeStyle,
      width: this.lineWidth,
      alpha: this.globalAlpha,
      dash: [...this.dash],
      points: this.path.map((p) => [...p] as [number, number]),
      closed: this.closed,
    });
  }

  fillRect(x: number, y: number, w: number, h: number): void {
    this.fills.push({ style: this.fillStyle, rect: [x, y, w, h] });
  }

  fillText(text: string, _x: number, _y: number): void {
    this.texts.push(text);
  }

  setLineDash(segments: number[]): void {
    this.dash = [...segments];
  }

  reset(): void {
    this.strokes = [];
    this.fills = [];
    this.texts = [];
    this.clears = 0;
  }
}
