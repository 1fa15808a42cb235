import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function golden(name: string): string {
    return join(here, "golden", name);
}

export function tempDir(): string {
    return mkdtempSync(join(tmpdir(), "tlnmf-plots-"));
}

/** y-coordinates of every polyline in an SVG string, in document order. */
export function polylineYs(svg: string): number[][] {
    const out: number[][] = [];
    for (const match of svg.matchAll(/<polyline[^>]*points="([^"]+)"/g)) {
        out.push(
            match[1]
                .trim()
                .split(/\s+/)
                .map((pair) => Number(pair.split(",")[1])),
        );
    }
    return out;
}
