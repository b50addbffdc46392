// Screen projection for instance coordinates.  Display-only: no distance
// or probability math happens here, just fitting points into the canvas.

export type Point = [number, number];

// GEO instances store (latitude, longitude); an equirectangular projection
// maps longitude to x and latitude to y.  Planar instances map directly.
// Both flip y so that "north" / larger y renders upward on screen.
export function project(
  coordinates: number[][],
  geo: boolean,
  width: number,
  height: number,
  pad: number,
): Point[] {
  const raw: Point[] = coordinates.map(([a, b]) =>
    geo ? [b, -a] : [a, -b],
  );
  const xs = raw.map((p) => p[0]);
  const ys = raw.map((p) => p[1]);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  // Uniform scale preserves aspect ratio; padding stays clear on all sides.
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const offX = (width - scale * spanX) / 2;
  const offY = (height - scale * spanY) / 2;
  return raw.map(([x, y]) => [
    offX + scale * (x - minX),
    offY + scale * (y - minY),
  ]);
}

// Fallback layout when an instance ships without coordinates: a circle.
export function circleLayout(n: number, width: number, height: number, pad: number): Point[] {
  const cx = width / 2;
  const cy = height / 2;
  const r = Math.min(width, height) / 2 - pad;
  const pts: Point[] = [];
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    pts.push([cx + r * Math.cos(angle), cy + r * Math.sin(angle)]);
  }
  return pts;
}

export function nearestNode(pts: Point[], x: number, y: number, radius: number): number {
  let best = -1;
  let bestD = radius * radius;
  for (let i = 0; i < pts.length; i++) {
    const dx = pts[i][0] - x;
    const dy = pts[i][1] - y;
    const d = dx * dx + dy * dy;
    if (d <= bestD) {
      best = i;
      bestD = d;
    }
  }
  return best;
}
