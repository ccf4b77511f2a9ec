import { readdirSync } from "node:fs";
import { join } from "node:path";

import { Dataset, SchemaError, numbers, readCsv, requireColumns, uniqueSorted } from "./csv.js";
import {
  arrow, axisBottom, axisLeft, divergingColor, el, extent, fmt, linearScale,
  polyline, sequentialColor, svgDocument, ticksFor, title,
} from "./svg.js";

const W = 560;
const H = 420;
const M = { left: 60, right: 20, top: 30, bottom: 45 };

function frame(xlab: string, ylab: string, xdom: [number, number], ydom: [number, number]) {
  const x = linearScale(xdom, [M.left, W - M.right]);
  const y = linearScale(ydom, [H - M.bottom, M.top]);
  const axes =
    axisBottom(x, H - M.bottom, ticksFor(xdom), xlab) + axisLeft(y, M.left, ticksFor(ydom), ylab);
  return { x, y, axes };
}

function load(dir: string, name: string): Dataset {
  return readCsv(join(dir, name));
}

// --- phase diagram -----------------------------------------------------------

export function renderPhaseDiagram(dir: string): string {
  const ds = load(dir, "sweep.csv");
  requireColumns(ds, ["g", "eta", "corr_nn_re", "corr_nnn_im"], "sweep.csv");
  const gs = uniqueSorted(numbers(ds, "g"));
  const etas = uniqueSorted(numbers(ds, "eta"));
  const panels: Array<[string, string]> = [
    ["corr_nn_re", "Re <b+(j+1) b(j)>"],
    ["corr_nnn_im", "Im <b+(j+2) b(j)>"],
  ];
  const panelW = (W - M.left - M.right - 30) / 2;
  const cellW = panelW / gs.length;
  const cellH = (H - M.top - M.bottom) / etas.length;
  const parts: string[] = [title("ground-state phase diagram", W)];
  panels.forEach(([col, label], p) => {
    const x0 = M.left + p * (panelW + 30);
    const vals = numbers(ds, col, "sweep.csv");
    const vmax = Math.max(...vals.map(Math.abs)) || 1;
    ds.rows.forEach((r, i) => {
      const gi = gs.indexOf(Number(r.g));
      const ei = etas.indexOf(Number(r.eta));
      parts.push(el("rect", {
        x: x0 + gi * cellW,
        y: H - M.bottom - (ei + 1) * cellH,
        width: cellW + 0.5,
        height: cellH + 0.5,
        fill: divergingColor(vals[i] / vmax),
      }));
    });
    parts.push(el("text", {
      x: x0 + panelW / 2, y: M.top - 6, "text-anchor": "middle", "font-size": "11",
    }, [], label));
    const xs = linearScale([gs[0], gs[gs.length - 1]], [x0 + cellW / 2, x0 + panelW - cellW / 2]);
    const ys = linearScale([etas[0], etas[etas.length - 1]],
      [H - M.bottom - cellH / 2, M.top + cellH / 2]);
    parts.push(axisBottom(xs, H - M.bottom, ticksFor(xs.domain, 4), "g"));
    if (p === 0) parts.push(axisLeft(ys, M.left, ticksFor(ys.domain, 5), "eta"));
    try {
      const peaks = load(dir, "sweep_peaks.csv");
      requireColumns(peaks, ["axis", "g", "eta"], "sweep_peaks.csv");
      for (const r of peaks.rows) {
        const px = xs(Number(r.g));
        const py = ys(Number(r.eta));
        if (r.axis === "g") {
          parts.push(el("path", {
            d: `M ${fmt(px - 3)} ${fmt(py - 3)} L ${fmt(px + 3)} ${fmt(py + 3)} ` +
              `M ${fmt(px - 3)} ${fmt(py + 3)} L ${fmt(px + 3)} ${fmt(py - 3)}`,
            stroke: "black", "stroke-width": "1.2", fill: "none",
          }));
        } else {
          parts.push(el("path", {
            d: `M ${fmt(px - 4)} ${fmt(py)} L ${fmt(px + 4)} ${fmt(py)} ` +
              `M ${fmt(px)} ${fmt(py - 4)} L ${fmt(px)} ${fmt(py + 4)}`,
            stroke: "black", "stroke-width": "1.2", fill: "none",
          }));
        }
      }
    } catch (err) {
      if (err instanceof SchemaError) throw err; // markers optional, schema errors are not
    }
  });
  return svgDocument(W, H, parts);
}

// --- correlation curves ------------------------------------------------------

function observableSeries(ds: Dataset, observable: string, path: string): [number[], number[]] {
  requireColumns(ds, ["observable", "index", "value"], path);
  const idx: number[] = [];
  const val: number[] = [];
  for (const r of ds.rows) {
    if (r.observable === observable) {
      idx.push(Number(r.index));
      val.push(Number(r.value));
    }
  }
  if (idx.length === 0) throw new SchemaError(`no '${observable}' rows in ${path}`);
  return [idx, val];
}

export function renderG2Curves(dir: string): string {
  const files = readdirSync(dir).filter((f) => f.startsWith("point") && f.endsWith(".csv")).sort();
  if (files.length === 0) throw new SchemaError(`no point*.csv files in ${dir}`);
  const curves = files.map((f) => {
    const ds = load(dir, f);
    const [idx, val] = observableSeries(ds, "g2", f);
    return { eta: Number(ds.meta.eta ?? NaN), idx, val };
  });
  const ydom = extent(curves.flatMap((c) => c.val));
  const xdom = extent(curves.flatMap((c) => c.idx));
  const { x, y, axes } = frame("distance j", "g2(j)", xdom, ydom);
  const parts = [title("density-density correlations", W), axes];
  curves.forEach((c, i) => {
    const color = sequentialColor(curves.length === 1 ? 0.5 : i / (curves.length - 1));
    parts.push(polyline(c.idx.map(x), c.val.map(y), color));
    parts.push(el("text", {
      x: W - M.right - 4, y: M.top + 14 + 13 * i, "text-anchor": "end",
      "font-size": "10", fill: color,
    }, [], `eta = ${fmt(c.eta).replace(/\.?0+$/, "")}`));
  });
  return svgDocument(W, H, parts);
}

// --- fidelity / current cut ---------------------------------------------------

export function renderFidelityCurrentCut(dir: string): string {
  const fid = load(dir, "cut_fidelity.csv");
  requireColumns(fid, ["lambda_mid", "fidelity"], "cut_fidelity.csv");
  const pts = load(dir, "cut_points.csv");
  requireColumns(pts, ["g", "current_nnn_paper_A"], "cut_points.csv");
  const lam = numbers(fid, "lambda_mid");
  const f = numbers(fid, "fidelity");
  const gs = numbers(pts, "g");
  const cur = numbers(pts, "current_nnn_paper_A");
  const half = (H - M.top - M.bottom - 30) / 2;
  const xdom = extent([...lam, ...gs]);
  const x = linearScale(xdom, [M.left, W - M.right]);
  const yf = linearScale(extent(f), [M.top + half, M.top]);
  const yc = linearScale(extent(cur), [H - M.bottom, H - M.bottom - half]);
  const parts = [
    title("fidelity and chain current", W),
    axisLeft(yf, M.left, ticksFor(yf.domain, 3), "f"),
    axisLeft(yc, M.left, ticksFor(yc.domain, 3), "I(j to j+2)"),
    axisBottom(x, H - M.bottom, ticksFor(xdom), "g"),
    polyline(lam.map(x), f.map(yf), "rgb(178,24,43)"),
    polyline(gs.map(x), cur.map(yc), "rgb(33,102,172)"),
  ];
  return svgDocument(W, H, parts);
}

// --- vortex current map --------------------------------------------------------

export function renderVortexCurrents(dir: string): string {
  const ds = load(dir, "point.csv");
  const [nnIdx, nnVal] = observableSeries(ds, "current_nn_paper", "point.csv");
  const [nnnIdx, nnnVal] = observableSeries(ds, "current_nnn_paper", "point.csv");
  const [siteIdx, dens] = observableSeries(ds, "density", "point.csv");
  const L = siteIdx.length;
  const xpos = (j: number) => M.left + (j * (W - M.left - M.right)) / (L - 1);
  const ypos = (j: number) => (j % 2 === 0 ? H / 2 - 55 : H / 2 + 55);
  const maxI = Math.max(...nnVal.map(Math.abs), ...nnnVal.map(Math.abs)) || 1;
  const parts = [title("bond currents (arrow length ~ |I|)", W)];
  nnnIdx.forEach((j, i) => {
    const s = nnnVal[i] / maxI;
    const x1 = xpos(j);
    const x2 = xpos(j + 2);
    const ym = ypos(j);
    const mid = (x1 + x2) / 2;
    const halfLen = (Math.abs(s) * (x2 - x1)) / 2;
    if (Math.abs(s) > 0.04) {
      const dir_ = Math.sign(s);
      parts.push(arrow(mid - dir_ * halfLen, ym, mid + dir_ * halfLen, ym,
        "rgb(33,102,172)", 1 + 2 * Math.abs(s)));
    }
  });
  nnIdx.forEach((j, i) => {
    const s = nnVal[i] / maxI;
    if (Math.abs(s) > 0.04) {
      const dir_ = Math.sign(s);
      const x1 = xpos(j);
      const y1 = ypos(j);
      const x2 = xpos(j + 1);
      const y2 = ypos(j + 1);
      const cx = (x1 + x2) / 2;
      const cy = (y1 + y2) / 2;
      const ux = (x2 - x1) / 2;
      const uy = (y2 - y1) / 2;
      parts.push(arrow(cx - dir_ * ux * Math.abs(s), cy - dir_ * uy * Math.abs(s),
        cx + dir_ * ux * Math.abs(s), cy + dir_ * uy * Math.abs(s),
        "rgb(178,24,43)", 1 + 2 * Math.abs(s)));
    }
  });
  siteIdx.forEach((j, i) => {
    parts.push(el("circle", {
      cx: xpos(j), cy: ypos(j), r: 3 + 6 * dens[i],
      fill: sequentialColor(dens[i]), stroke: "black", "stroke-width": "0.5",
    }));
  });
  return svgDocument(W, H, parts);
}

// --- band structures ------------------------------------------------------------

export function renderBands(dir: string): string {
  const ds = load(dir, "mf_bands.csv");
  requireColumns(ds, ["g", "k", "e_lower", "e_upper", "e_fermi"], "mf_bands.csv");
  const gs = uniqueSorted(numbers(ds, "g"));
  const ks = numbers(ds, "k");
  const ydom = extent([...numbers(ds, "e_lower"), ...numbers(ds, "e_upper")]);
  const { x, y, axes } = frame("k", "E(k) - E_F", extent(ks), ydom);
  const parts = [title("mean-field bands", W), axes];
  gs.forEach((g, gi) => {
    const rows = ds.rows.filter((r) => Number(r.g) === g);
    const color = sequentialColor(gs.length === 1 ? 0.5 : gi / (gs.length - 1));
    const kk = rows.map((r) => Number(r.k));
    const ef = Number(rows[0].e_fermi);
    parts.push(polyline(kk.map(x), rows.map((r) => y(Number(r.e_lower) - ef)), color));
    parts.push(polyline(kk.map(x), rows.map((r) => y(Number(r.e_upper) - ef)), color));
    parts.push(el("text", {
      x: W - M.right - 4, y: M.top + 14 + 13 * gi, "text-anchor": "end",
      "font-size": "10", fill: color,
    }, [], `g = ${fmt(g).replace(/\.?0+$/, "")}`));
  });
  parts.push(polyline([x(x.domain[0]), x(x.domain[1])], [y(0), y(0)], "rgb(120,120,120)", 0.7));
  return svgDocument(W, H, parts);
}

export function renderFoldedBands(dir: string): string {
  const ds = load(dir, "mf_folded.csv");
  requireColumns(ds, ["g", "k", "e1", "e2", "e3", "e4"], "mf_folded.csv");
  const gs = uniqueSorted(numbers(ds, "g"));
  const ydom = extent(["e1", "e2", "e3", "e4"].flatMap((c) => numbers(ds, c)));
  const { x, y, axes } = frame("k (folded zone)", "E(k)", extent(numbers(ds, "k")), ydom);
  const parts = [title("folded sub-bands (four-site cell)", W), axes];
  gs.forEach((g, gi) => {
    const rows = ds.rows.filter((r) => Number(r.g) === g);
    const color = sequentialColor(gs.length === 1 ? 0.5 : gi / (gs.length - 1));
    const kk = rows.map((r) => Number(r.k));
    for (const c of ["e1", "e2"]) {
      parts.push(polyline(kk.map(x), rows.map((r) => y(Number(r[c]))), color));
    }
    for (const c of ["e3", "e4"]) {
      const pts = kk.map((k, i) => `${fmt(x(k))},${fmt(y(Number(rows[i][c])))}`).join(" ");
      parts.push(el("polyline", {
        points: pts, fill: "none", stroke: color, "stroke-width": "1",
        "stroke-dasharray": "3 3",
      }));
    }
    parts.push(el("text", {
      x: W - M.right - 4, y: M.top + 14 + 13 * gi, "text-anchor": "end",
      "font-size": "10", fill: color,
    }, [], `g = ${fmt(g).replace(/\.?0+$/, "")}`));
  });
  return svgDocument(W, H, parts);
}

// --- flux / chi -------------------------------------------------------------------

export function renderFluxChi(dir: string): string {
  const pts = load(dir, "cut_points.csv");
  requireColumns(pts, ["g", "chi"], "cut_points.csv");
  const point = load(dir, "point.csv");
  const [plaq, flux] = observableSeries(point, "flux_mean", "point.csv");
  const gs = numbers(pts, "g");
  const chi = numbers(pts, "chi");
  const half = (H - M.top - M.bottom - 30) / 2;
  const xc = linearScale(extent(gs), [M.left, W - M.right]);
  const yc = linearScale(extent(chi), [M.top + half, M.top]);
  const xf = linearScale(extent(plaq), [M.left, W - M.right]);
  const yf = linearScale(extent(flux), [H - M.bottom, H - M.bottom - half]);
  const parts = [
    title("flux order parameter and plaquette fluxes", W),
    axisLeft(yc, M.left, ticksFor(yc.domain, 3), "chi"),
    axisBottom(xc, M.top + half, ticksFor(xc.domain, 5), "g"),
    polyline(gs.map(xc), chi.map(yc), "rgb(178,24,43)"),
    axisLeft(yf, M.left, ticksFor(yf.domain, 3), "<Phi(j)>"),
    axisBottom(xf, H - M.bottom, ticksFor(xf.domain, 5), "plaquette j"),
  ];
  plaq.forEach((j, i) => {
    const x0 = xf(j);
    parts.push(el("line", {
      x1: x0, x2: x0, y1: yf(0), y2: yf(flux[i]),
      stroke: "rgb(33,102,172)", "stroke-width": "3",
    }));
  });
  return svgDocument(W, H, parts);
}

// --- Gutzwiller -------------------------------------------------------------------

export function renderGutzwillerMap(dir: string): string {
  const ds = load(dir, "gutzwiller_contour.csv");
  requireColumns(ds, ["epsilon", "phi", "energy", "chi"], "gutzwiller_contour.csv");
  const eps = uniqueSorted(numbers(ds, "epsilon"));
  const phi = uniqueSorted(numbers(ds, "phi"));
  const e = numbers(ds, "energy");
  const [lo, hi] = extent(e);
  const cellW = (W - M.left - M.right) / eps.length;
  const cellH = (H - M.top - M.bottom) / phi.length;
  const parts = [title("variational energy over (eps, phi)", W)];
  let best = 0;
  e.forEach((v, i) => { if (v < e[best]) best = i; });
  ds.rows.forEach((r, i) => {
    const xi = eps.indexOf(Number(r.epsilon));
    const yi = phi.indexOf(Number(r.phi));
    parts.push(el("rect", {
      x: M.left + xi * cellW,
      y: H - M.bottom - (yi + 1) * cellH,
      width: cellW + 0.5, height: cellH + 0.5,
      fill: sequentialColor((e[i] - lo) / (hi - lo || 1)),
    }));
  });
  const xs = linearScale([eps[0], eps[eps.length - 1]],
    [M.left + cellW / 2, W - M.right - cellW / 2]);
  const ys = linearScale([phi[0], phi[phi.length - 1]],
    [H - M.bottom - cellH / 2, M.top + cellH / 2]);
  parts.push(axisBottom(xs, H - M.bottom, ticksFor(xs.domain), "eps"));
  parts.push(axisLeft(ys, M.left, ticksFor(ys.domain), "phi"));
  const bx = xs(Number(ds.rows[best].epsilon));
  const by = ys(Number(ds.rows[best].phi));
  parts.push(el("path", {
    d: `M ${fmt(bx - 4)} ${fmt(by - 4)} L ${fmt(bx + 4)} ${fmt(by + 4)} ` +
      `M ${fmt(bx - 4)} ${fmt(by + 4)} L ${fmt(bx + 4)} ${fmt(by - 4)}`,
    stroke: "white", "stroke-width": "1.5", fill: "none",
  }));
  return svgDocument(W, H, parts);
}

export function renderEpsilonCurve(dir: string): string {
  const ds = load(dir, "gutzwiller.csv");
  requireColumns(ds, ["g", "epsilon"], "gutzwiller.csv");
  const gs = numbers(ds, "g");
  const eps = numbers(ds, "epsilon").map(Math.abs);
  const { x, y, axes } = frame("g", "|eps*|", extent(gs), extent([0, ...eps]));
  const parts = [title("optimal density modulation", W), axes,
    polyline(gs.map(x), eps.map(y), "rgb(33,102,172)")];
  gs.forEach((g, i) => {
    parts.push(el("circle", { cx: x(g), cy: y(eps[i]), r: 2.5, fill: "rgb(33,102,172)" }));
  });
  return svgDocument(W, H, parts);
}

// --- eta scaling --------------------------------------------------------------------

export function renderEtaScaling(dir: string): string {
  const pts = load(dir, "cut_points.csv");
  requireColumns(pts, ["eta", "current_nnn_paper_A"], "cut_points.csv");
  const fit = load(dir, "cut_scaling_fit.csv");
  requireColumns(fit, ["slope", "intercept"], "cut_scaling_fit.csv");
  const eta = numbers(pts, "eta");
  const cur = numbers(pts, "current_nnn_paper_A").map(Math.abs);
  const lx = eta.map(Math.log10);
  const ly = cur.map(Math.log10);
  const { x, y, axes } = frame("log10 eta", "log10 |I|", extent(lx), extent(ly));
  const slope = Number(fit.rows[0].slope);
  const intercept = Number(fit.rows[0].intercept);
  const fitY = lx.map((v) => (slope * (v * Math.LN10) + intercept) / Math.LN10);
  const parts = [
    title(`current suppression, fitted slope ${fmt(slope)}`, W), axes,
    polyline(lx.map(x), fitY.map(y), "rgb(120,120,120)", 1),
  ];
  lx.forEach((v, i) => {
    parts.push(el("circle", { cx: x(v), cy: y(ly[i]), r: 3, fill: "rgb(178,24,43)" }));
  });
  return svgDocument(W, H, parts);
}
