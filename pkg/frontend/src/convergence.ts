/**
 * Convergence figures: objective against iteration and against wall
 * clock, one labeled curve per input CSV, objective on a log axis.
 */

import { basename } from "node:path";
import { writeFileSync } from "node:fs";

import { numericColumns, readTable } from "./csv.js";
import {
    axes,
    decadeTicks,
    document,
    Frame,
    legend,
    linearScale,
    linearTicks,
    LOG_FLOOR,
    logScale,
    PALETTE,
    polyline,
} from "./svg.js";

export const CONVERGENCE_COLUMNS = ["iteration", "objective", "elapsed_s"];

export interface Series {
    label: string;
    iteration: number[];
    objective: number[];
    elapsed: number[];
}

export function loadSeries(path: string): Series {
    const table = readTable(path);
    const [iteration, objective, elapsed] = numericColumns(
        table,
        CONVERGENCE_COLUMNS,
        path,
    );
    return {
        label: basename(path).replace(/\.csv$/i, ""),
        iteration,
        objective,
        elapsed,
    };
}

function panel(
    series: Series[],
    frame: Frame,
    xOf: (s: Series) => number[],
    xLabel: string,
): string {
    const allX = series.flatMap(xOf);
    const allY = series.flatMap((s) => s.objective);
    const xLo = Math.min(...allX);
    const xHi = Math.max(...allX);
    const yLo = Math.max(Math.min(...allY), LOG_FLOOR);
    const yHi = Math.max(...allY);
    const xScale = linearScale(xLo, xHi, frame.x0, frame.x0 + frame.width);
    const yScale = logScale(yHi, yLo, frame.y0, frame.y0 + frame.height);
    const body = series.map((s, i) =>
        polyline(
            xOf(s).map((x, j) => [xScale(x), yScale(s.objective[j])]),
            PALETTE[i % PALETTE.length],
        ),
    );
    return (
        axes({
            frame,
            xTicks: linearTicks(xLo, xHi),
            yTicks: decadeTicks(yLo, yHi),
            xScale,
            yScale,
            xLabel,
            yLabel: "objective",
        }) + "\n" + body.join("\n")
    );
}

export function renderConvergence(series: Series[]): string {
    const width = 900;
    const height = 430;
    const left: Frame = { x0: 70, y0: 40, width: 330, height: 310 };
    const right: Frame = { x0: 500, y0: 40, width: 330, height: 310 };
    const body =
        panel(series, left, (s) => s.iteration, "iteration") +
        "\n" +
        panel(series, right, (s) => s.elapsed, "elapsed (s)") +
        "\n" +
        legend(series.map((s) => s.label), 70, height - 18);
    return document(width, height, body, "Objective convergence");
}

export function plotConvergence(csvPaths: string[], outPath: string): void {
    const series = csvPaths.map(loadSeries);
    writeFileSync(outPath, renderConvergence(series), "utf-8");
}
