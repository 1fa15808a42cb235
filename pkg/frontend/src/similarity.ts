/**
 * Similarity heatmap: permuted absolute atom correlations on a unit
 * color scale, with the matched pairs along the diagonal.
 */

import { writeFileSync } from "node:fs";

import { readTable, squareMatrix } from "./csv.js";
import { document, esc, formatTick } from "./svg.js";

/** Unit-interval value to a white->blue ramp. */
export function rampColor(v: number): string {
    const clipped = Math.min(1, Math.max(0, v));
    const r = Math.round(255 - 224 * clipped);
    const g = Math.round(255 - 180 * clipped);
    const b = Math.round(255 - 75 * clipped);
    return `rgb(${r},${g},${b})`;
}

export function renderSimilarity(matrix: number[][]): string {
    const k = matrix.length;
    const frame = { x0: 70, y0: 40, size: 360 };
    const cell = frame.size / k;
    const cells: string[] = [];
    for (let i = 0; i < k; i++) {
        for (let j = 0; j < k; j++) {
            const x = frame.x0 + j * cell;
            const y = frame.y0 + i * cell;
            cells.push(
                `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" ` +
                `width="${cell.toFixed(2)}" height="${cell.toFixed(2)}" ` +
                `fill="${rampColor(matrix[i][j])}"/>`,
            );
        }
    }
    const bottom = frame.y0 + frame.size;
    cells.push(
        `<rect x="${frame.x0}" y="${frame.y0}" width="${frame.size}" ` +
        `height="${frame.size}" fill="none" stroke="#333"/>`,
        `<text x="${frame.x0 + frame.size / 2}" y="${bottom + 18}" ` +
        `font-size="11" text-anchor="middle">atoms of run 2 (matched order)</text>`,
        `<text x="${frame.x0 - 14}" y="${frame.y0 + frame.size / 2}" ` +
        `font-size="11" text-anchor="middle" transform="rotate(-90 ` +
        `${frame.x0 - 14} ${frame.y0 + frame.size / 2})">atoms of run 1</text>`,
    );
    // colorbar with a unit scale
    const barX = frame.x0 + frame.size + 30;
    const steps = 40;
    for (let s = 0; s < steps; s++) {
        const v = 1 - s / (steps - 1);
        cells.push(
            `<rect x="${barX}" y="${(frame.y0 + (s * frame.size) / steps).toFixed(2)}" ` +
            `width="16" height="${(frame.size / steps + 0.5).toFixed(2)}" ` +
            `fill="${rampColor(v)}"/>`,
        );
    }
    for (const v of [0, 0.5, 1]) {
        const y = frame.y0 + (1 - v) * frame.size;
        cells.push(
            `<text x="${barX + 22}" y="${(y + 4).toFixed(2)}" font-size="10">` +
            `${esc(formatTick(v))}</text>`,
        );
    }
    return document(barX + 60, bottom + 40, cells.join("\n"), "Atom similarity |PT|");
}

export function plotSimilarity(csvPath: string, outPath: string): void {
    const matrix = squareMatrix(readTable(csvPath), csvPath);
    writeFileSync(outPath, renderSimilarity(matrix), "utf-8");
}
