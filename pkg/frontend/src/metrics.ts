/**
 * Step-response metrics over received frames, plus a parser for the filter
 * CLI's CSV output.  Used to cross-check that the UI's view of a run matches
 * a batch run bit for bit (the server computes all motion; the UI only
 * displays and measures).
 */

export interface MotionSample {
  t: number;
  x: number;
  v: number;
  a: number;
  j: number;
}

/** Peak excursion beyond the target, as a fraction of the step size. */
export function overshootFraction(
  samples: MotionSample[],
  stepFrom: number,
  stepTo: number,
  stepAt: number,
  windowEnd: number,
): number {
  const size = Math.abs(stepTo - stepFrom);
  if (size === 0) throw new Error("step must change value");
  const sign = Math.sign(stepTo - stepFrom);
  let peak = -Infinity;
  for (const sample of samples) {
    if (sample.t >= stepAt && sample.t <= windowEnd) {
      peak = Math.max(peak, sign * (sample.x - stepTo));
    }
  }
  if (peak === -Infinity) throw new Error("no samples in the step window");
  return Math.max(0, peak) / size;
}

/** Parse the CLI's `t,x,v,a,j` CSV (full-precision floats round-trip). */
export function parseOutputCsv(text: string): MotionSample[] {
  const lines = text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== "t,x,v,a,j") {
    throw new Error("output CSV must start with header t,x,v,a,j");
  }
  return lines.slice(1).map((line, i) => {
    const cols = line.split(",").map(Number);
    if (cols.length !== 5 || cols.some((c) => Number.isNaN(c))) {
      throw new Error(`bad CSV row ${i + 2}: ${line}`);
    }
    const [t, x, v, a, j] = cols;
    return { t, x, v, a, j };
  });
}
