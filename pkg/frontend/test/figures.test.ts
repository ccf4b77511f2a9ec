import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { FIGURES, renderFigure, SchemaError } from "../src/index.js";

const SAMPLE = join(__dirname, "..", "sample-data");

describe("figure rendering", () => {
  for (const id of Object.keys(FIGURES).sort()) {
    it(`renders '${id}' from the shipped sample dataset`, () => {
      const svg = renderFigure(id, join(SAMPLE, id));
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
      expect(svg.length).toBeGreaterThan(500);
      expect(svg).not.toContain("NaN");
    });

    it(`renders '${id}' deterministically`, () => {
      const a = renderFigure(id, join(SAMPLE, id));
      const b = renderFigure(id, join(SAMPLE, id));
      expect(b).toBe(a);
    });
  }

  it("rejects unknown figure ids", () => {
    expect(() => renderFigure("nope", SAMPLE)).toThrow(/unknown figure id/);
  });

  it("names the missing column in schema errors", () => {
    const dir = mkdtempSync(join(tmpdir(), "zzfig-"));
    const src = readFileSync(join(SAMPLE, "bands", "mf_bands.csv"), "utf-8");
    const broken = src
      .split("\n")
      .map((l) => (l.startsWith("#") ? l : l.replace(/(^|,)e_upper(,|$)/, "$1e_up$2")))
      .join("\n");
    writeFileSync(join(dir, "mf_bands.csv"), broken);
    expect(() => renderFigure("bands", dir)).toThrow(SchemaError);
    expect(() => renderFigure("bands", dir)).toThrow(/e_upper/);
  });

  it("never invents physics: plotted fit line comes from the stored fit", () => {
    const svg = renderFigure("eta-scaling", join(SAMPLE, "eta-scaling"));
    const meta = readFileSync(join(SAMPLE, "eta-scaling", "cut_scaling_fit.csv"), "utf-8");
    const slope = Number(
      meta.split("\n").filter((l) => !l.startsWith("#"))[1].split(",")[1],
    );
    expect(svg).toContain(`fitted slope ${slope.toFixed(3)}`);
  });
});
