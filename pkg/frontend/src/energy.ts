/**
 * Energy cumulative-distribution figure: how much of the total signal
 * energy the top-n atoms of each transform capture, three fixed series
 * (learned, DCT, random reference).
 */

import { writeFileSync } from "node:fs";

import { numericColumns, readTable, SchemaMismatch } from "./csv.js";
import {
    axes,
    document,
    Frame,
    legend,
    linearScale,
    linearTicks,
    PALETTE,
    polyline,
} from "./svg.js";

export const ENERGY_COLUMNS = ["atom_index", "energy", "cumulative"];
export const SERIES_LABELS = ["learned", "DCT", "random"] as const;

export function loadCumulative(path: string): number[] {
    const [, , cumulative] = numericColumns(
        readTable(path),
        ENERGY_COLUMNS,
        path,
    );
    return cumulative;
}

export function renderEnergyCdf(curves: number[][]): string {
    const m = curves[0].length;
    if (curves.some((c) => c.length !== m)) {
        throw new SchemaMismatch(
            `energy profiles disagree on atom count: ` +
            curves.map((c) => c.length).join(" vs "),
        );
    }
    const width = 640;
    const height = 430;
    const frame: Frame = { x0: 70, y0: 40, width: 480, height: 310 };
    const xScale = linearScale(1, m, frame.x0, frame.x0 + frame.width);
    const yScale = linearScale(0, 1, frame.y0 + frame.height, frame.y0);
    const body = curves.map((c, i) =>
        polyline(
            c.map((v, j) => [xScale(j + 1), yScale(Math.min(v, 1))]),
            PALETTE[i % PALETTE.length],
        ),
    );
    return document(
        width,
        height,
        axes({
            frame,
            xTicks: linearTicks(1, m),
            yTicks: [0, 0.25, 0.5, 0.75, 1],
            xScale,
            yScale,
            xLabel: "atoms (sorted by contributed energy)",
            yLabel: "cumulative energy fraction",
        }) +
        "\n" +
        body.join("\n") +
        "\n" +
        legend([...SERIES_LABELS], frame.x0 + 8, height - 18),
        "Atom energy concentration",
    );
}

export function plotEnergyCdf(
    learnedCsv: string,
    dctCsv: string,
    randomCsv: string,
    outPath: string,
): void {
    const curves = [learnedCsv, dctCsv, randomCsv].map(loadCumulative);
    writeFileSync(outPath, renderEnergyCdf(curves), "utf-8");
}
