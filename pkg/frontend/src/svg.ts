/** Minimal deterministic SVG builder: fixed-precision numbers, no dates,
 *  stable attribute order. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text = "",
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  const inner = text + children.join("");
  return inner.length > 0 ? `<${tag} ${a}>${inner}</${tag}>` : `<${tag} ${a}/>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">` +
    children.join("") +
    `</svg>\n`
  );
}

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (lo > hi) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function rgb(stops: number[][], t: number): string {
  const x = Math.min(1, Math.max(0, t)) * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(x));
  const f = x - i;
  const c = stops[i].map((v, k) => Math.round(lerp(v, stops[i + 1][k], f)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

const VIRIDIS = [
  [68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37],
];

const DIVERGING = [
  [33, 102, 172], [146, 197, 222], [247, 247, 247], [244, 165, 130], [178, 24, 43],
];

export function sequentialColor(t: number): string {
  return rgb(VIRIDIS, t);
}

/** Symmetric diverging map: t in [-1, 1]. */
export function divergingColor(t: number): string {
  return rgb(DIVERGING, (Math.min(1, Math.max(-1, t)) + 1) / 2);
}

export function axisBottom(scale: Scale, y: number, ticks: number[], label: string): string {
  const parts = [
    el("line", {
      x1: scale.range[0], x2: scale.range[1], y1: y, y2: y,
      stroke: "black", "stroke-width": "1",
    }),
  ];
  for (const t of ticks) {
    const x = scale(t);
    parts.push(el("line", { x1: x, x2: x, y1: y, y2: y + 4, stroke: "black", "stroke-width": "1" }));
    parts.push(el("text", {
      x, y: y + 15, "text-anchor": "middle", "font-size": "10",
    }, [], fmt(t).replace(/\.?0+$/, "") || "0"));
  }
  const mid = (scale.range[0] + scale.range[1]) / 2;
  parts.push(el("text", { x: mid, y: y + 30, "text-anchor": "middle", "font-size": "11" }, [], label));
  return parts.join("");
}

export function axisLeft(scale: Scale, x: number, ticks: number[], label: string): string {
  const parts = [
    el("line", {
      x1: x, x2: x, y1: scale.range[0], y2: scale.range[1],
      stroke: "black", "stroke-width": "1",
    }),
  ];
  for (const t of ticks) {
    const y = scale(t);
    parts.push(el("line", { x1: x - 4, x2: x, y1: y, y2: y, stroke: "black", "stroke-width": "1" }));
    parts.push(el("text", {
      x: x - 6, y: y + 3, "text-anchor": "end", "font-size": "10",
    }, [], fmt(t).replace(/\.?0+$/, "") || "0"));
  }
  const mid = (scale.range[0] + scale.range[1]) / 2;
  parts.push(el("text", {
    x: x - 32, y: mid, "font-size": "11", "text-anchor": "middle",
    transform: `rotate(-90 ${fmt(x - 32)} ${fmt(mid)})`,
  }, [], label));
  return parts.join("");
}

export function ticksFor(domain: [number, number], n = 5): number[] {
  const [lo, hi] = domain;
  const step = (hi - lo) / (n - 1);
  return Array.from({ length: n }, (_, i) => lo + i * step);
}

export function polyline(xs: number[], ys: number[], stroke: string, width = 1.5): string {
  const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
  return el("polyline", { points: pts, fill: "none", stroke, "stroke-width": width });
}

export function arrow(x1: number, y1: number, x2: number, y2: number, color: string, width: number): string {
  const dx = x2 - x1;
  const dy = y2 - y1;
  const len = Math.hypot(dx, dy) || 1;
  const ux = dx / len;
  const uy = dy / len;
  const head = Math.min(6, len * 0.4);
  const hx = x2 - head * ux;
  const hy = y2 - head * uy;
  const px = -uy;
  const py = ux;
  const tri = `${fmt(x2)},${fmt(y2)} ${fmt(hx + (head / 2) * px)},${fmt(hy + (head / 2) * py)} ` +
    `${fmt(hx - (head / 2) * px)},${fmt(hy - (head / 2) * py)}`;
  return (
    el("line", { x1, y1, x2: hx, y2: hy, stroke: color, "stroke-width": width }) +
    el("polygon", { points: tri, fill: color })
  );
}

export function title(text: string, width: number): string {
  return el("text", {
    x: width / 2, y: 16, "text-anchor": "middle", "font-size": "13", "font-weight": "bold",
  }, [], text);
}
