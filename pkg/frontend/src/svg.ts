/**
 * Minimal SVG scene building: scales, axes, polylines, heatmap cells.
 * No rendering dependencies; output is a standalone SVG document.
 */

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

// Log axes floor nonpositive values here so exact zeros stay plottable.
export const LOG_FLOOR = 1e-16;

export interface Frame {
    x0: number;
    y0: number;
    width: number;
    height: number;
}

export type Scale = (value: number) => number;

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
    const span = hi - lo || 1;
    return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

export function logScale(d0: number, d1: number, out0: number, out1: number): Scale {
    // domain endpoints may arrive in either order (inverted axes)
    const a = Math.max(d0, LOG_FLOOR);
    let b = Math.max(d1, LOG_FLOOR);
    if (a === b) {
        b = a * 10;
    }
    const base = linearScale(Math.log10(a), Math.log10(b), out0, out1);
    return (v) => base(Math.log10(Math.max(v, LOG_FLOOR)));
}

export function linearTicks(lo: number, hi: number, count = 5): number[] {
    if (hi <= lo) return [lo];
    const rawStep = (hi - lo) / count;
    const mag = 10 ** Math.floor(Math.log10(rawStep));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= count) ?? mag * 10;
    const first = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let v = first; v <= hi + step * 1e-9; v += step) ticks.push(v);
    return ticks;
}

export function decadeTicks(lo: number, hi: number): number[] {
    const safeLo = Math.max(lo, LOG_FLOOR);
    const safeHi = Math.max(hi, safeLo * 10);
    const first = Math.ceil(Math.log10(safeLo));
    const last = Math.floor(Math.log10(safeHi));
    const step = Math.max(1, Math.ceil((last - first) / 8));
    const ticks: number[] = [];
    for (let p = first; p <= last; p += step) ticks.push(10 ** p);
    return ticks;
}

export function formatTick(v: number): string {
    if (v === 0) return "0";
    const abs = Math.abs(v);
    if (abs >= 1e4 || abs < 1e-2) {
        const exp = Math.floor(Math.log10(abs));
        const mant = v / 10 ** exp;
        const m = Math.abs(mant - 1) < 1e-9 ? "" : `${mant.toPrecision(2)}·`;
        return `${m}1e${exp}`;
    }
    return `${Number(v.toPrecision(4))}`;
}

export function esc(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;");
}

export function polyline(points: Array<[number, number]>, stroke: string): string {
    const path = points
        .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
        .join(" ");
    return `<polyline fill="none" stroke="${stroke}" stroke-width="1.6" points="${path}"/>`;
}

export interface AxisSpec {
    frame: Frame;
    xTicks: number[];
    yTicks: number[];
    xScale: Scale;
    yScale: Scale;
    xLabel: string;
    yLabel: string;
}

export function axes(spec: AxisSpec): string {
    const { frame, xTicks, yTicks, xScale, yScale, xLabel, yLabel } = spec;
    const parts: string[] = [];
    const bottom = frame.y0 + frame.height;
    const right = frame.x0 + frame.width;
    parts.push(
        `<rect x="${frame.x0}" y="${frame.y0}" width="${frame.width}" ` +
        `height="${frame.height}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
    for (const t of xTicks) {
        const x = xScale(t);
        parts.push(
            `<line x1="${x.toFixed(2)}" y1="${bottom}" x2="${x.toFixed(2)}" ` +
            `y2="${bottom + 4}" stroke="#333"/>`,
            `<text x="${x.toFixed(2)}" y="${bottom + 16}" font-size="10" ` +
            `text-anchor="middle">${esc(formatTick(t))}</text>`,
        );
    }
    for (const t of yTicks) {
        const y = yScale(t);
        parts.push(
            `<line x1="${frame.x0 - 4}" y1="${y.toFixed(2)}" x2="${frame.x0}" ` +
            `y2="${y.toFixed(2)}" stroke="#333"/>`,
            `<text x="${frame.x0 - 6}" y="${(y + 3).toFixed(2)}" font-size="10" ` +
            `text-anchor="end">${esc(formatTick(t))}</text>`,
        );
    }
    parts.push(
        `<text x="${frame.x0 + frame.width / 2}" y="${bottom + 32}" ` +
        `font-size="11" text-anchor="middle">${esc(xLabel)}</text>`,
        `<text x="${frame.x0 - 46}" y="${frame.y0 + frame.height / 2}" ` +
        `font-size="11" text-anchor="middle" ` +
        `transform="rotate(-90 ${frame.x0 - 46} ${frame.y0 + frame.height / 2})">` +
        `${esc(yLabel)}</text>`,
    );
    return parts.join("\n");
}

export function legend(labels: string[], x: number, y: number): string {
    return labels
        .map((label, i) => {
            const ly = y + i * 16;
            return (
                `<line x1="${x}" y1="${ly}" x2="${x + 18}" y2="${ly}" ` +
                `stroke="${PALETTE[i % PALETTE.length]}" stroke-width="2"/>` +
                `<text x="${x + 24}" y="${ly + 4}" font-size="11">${esc(label)}</text>`
            );
        })
        .join("\n");
}

export function document(width: number, height: number, body: string, title: string): string {
    return (
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
        `height="${height}" viewBox="0 0 ${width} ${height}" ` +
        `font-family="Helvetica, Arial, sans-serif">\n` +
        `<rect width="${width}" height="${height}" fill="white"/>\n` +
        `<text x="${width / 2}" y="20" font-size="13" text-anchor="middle">` +
        `${esc(title)}</text>\n${body}\n</svg>\n`
    );
}
