import {
  renderBands, renderEpsilonCurve, renderEtaScaling, renderFidelityCurrentCut,
  renderFluxChi, renderFoldedBands, renderG2Curves, renderGutzwillerMap,
  renderPhaseDiagram, renderVortexCurrents,
} from "./figures.js";

export { SchemaError } from "./csv.js";

export type Renderer = (dataDir: string) => string;

/** Every figure id renders from CSV columns alone; nothing is recomputed. */
export const FIGURES: Record<string, { render: Renderer; inputs: string[] }> = {
  "phase-diagram": { render: renderPhaseDiagram, inputs: ["sweep.csv", "sweep_peaks.csv"] },
  "g2": { render: renderG2Curves, inputs: ["point*.csv"] },
  "fidelity-current-cut": {
    render: renderFidelityCurrentCut,
    inputs: ["cut_fidelity.csv", "cut_points.csv"],
  },
  "vortex-currents": { render: renderVortexCurrents, inputs: ["point.csv"] },
  "bands": { render: renderBands, inputs: ["mf_bands.csv"] },
  "folded-bands": { render: renderFoldedBands, inputs: ["mf_folded.csv"] },
  "flux-chi": { render: renderFluxChi, inputs: ["cut_points.csv", "point.csv"] },
  "gutzwiller-map": { render: renderGutzwillerMap, inputs: ["gutzwiller_contour.csv"] },
  "epsilon-curve": { render: renderEpsilonCurve, inputs: ["gutzwiller.csv"] },
  "eta-scaling": {
    render: renderEtaScaling,
    inputs: ["cut_points.csv", "cut_scaling_fit.csv"],
  },
};

export function renderFigure(id: string, dataDir: string): string {
  const entry = FIGURES[id];
  if (!entry) {
    throw new Error(`unknown figure id '${id}'; known: ${Object.keys(FIGURES).sort().join(", ")}`);
  }
  return entry.render(dataDir);
}
