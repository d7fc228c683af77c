// Predefined path for the qualitative path-following task.  The shape is
// a stand-in (an S-curve spanning the screen), not a normative artifact:
// no score is computed from it.

export interface Point {
  x: number;
  y: number;
}

export function sCurvePath(width: number, height: number, samples = 120): Point[] {
  const margin = 0.12;
  const points: Point[] = [];
  for (let i = 0; i <= samples; i++) {
    const t = i / samples;
    const x = width * (margin + (1 - 2 * margin) * t);
    const y = height * (0.5 + 0.33 * Math.sin(2 * Math.PI * (t - 0.25)));
    points.push({ x, y });
  }
  return points;
}

export function nearestDistance(path: Point[], x: number, y: number): number {
  let best = Infinity;
  for (const p of path) {
    const d = Math.hypot(p.x - x, p.y - y);
    if (d < best) best = d;
  }
  return best;
}
