// Client-side recomputation of the per-trial metrics.  The server's trial
// CSV is authoritative; the UI recomputes from the wire values and any
// disagreement beyond 1e-6 relative is treated as a bug.

export function indexOfDifficulty(d: number, w: number): number {
  if (w <= 0) throw new Error("target width must be positive");
  return d / w;
}

export function pathEfficiency(d: number, p: number): number {
  if (p <= 0) throw new Error("path length must be positive");
  return d / p;
}

export function throughput(id: number, mtMs: number): number {
  if (mtMs <= 0) throw new Error("movement time must be positive");
  return id / (mtMs / 1000);
}

export function relativeDiff(a: number, b: number): number {
  const scale = Math.max(Math.abs(a), Math.abs(b), 1e-30);
  return Math.abs(a - b) / scale;
}
