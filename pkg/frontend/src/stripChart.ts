// Live strip chart of the filtered channels with the calibrated bands.

import type { SignalPoint } from "./sessionView.js";

export interface Band {
  lo: number;
  hi: number;
  color: string;
}

export function thresholdBands(thresholds: Record<string, number> | null): Band[] {
  if (!thresholds) return [];
  if ("lower1" in thresholds) {
    return [
      { lo: thresholds.lower1!, hi: thresholds.upper1!, color: "rgba(88,166,255,0.18)" },
      { lo: thresholds.lower2!, hi: thresholds.upper2!, color: "rgba(255,166,87,0.18)" },
    ];
  }
  // direct mode: show the vertical extremes band
  if ("u1" in thresholds) {
    const u = (thresholds.u1! + thresholds.u2!) / 2;
    const d = (thresholds.d1! + thresholds.d2!) / 2;
    return [{ lo: u, hi: d, color: "rgba(126,231,135,0.12)" }];
  }
  return [];
}

export function drawStripChart(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  signals: SignalPoint[],
  thresholds: Record<string, number> | null,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0d1117";
  ctx.fillRect(0, 0, width, height);
  const yOf = (level: number) => height - (level / 255) * height;

  for (const band of thresholdBands(thresholds)) {
    const top = yOf(band.hi);
    ctx.fillStyle = band.color;
    ctx.fillRect(0, top, width, yOf(band.lo) - top);
  }

  const plot = (pick: (p: SignalPoint) => number, color: string) => {
    if (signals.length < 2) return;
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    signals.forEach((p, i) => {
      const x = (i / (signals.length - 1)) * width;
      const y = yOf(pick(p));
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  };
  plot((p) => p.f1, "#58a6ff");
  plot((p) => p.f2, "#ffa657");
}
