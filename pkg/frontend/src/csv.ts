/**
 * CSV ingestion and schema validation for the tlnmf output files.
 *
 * The upstream CLI writes plain comma-separated UTF-8 with one header
 * row and no quoted fields, so parsing is a straight split. Anything
 * that does not match the pinned schemas raises SchemaMismatch.
 */

import { readFileSync } from "node:fs";

export class SchemaMismatch extends Error {
    constructor(message: string) {
        super(message);
        this.name = "SchemaMismatch";
    }
}

export interface Table {
    header: string[];
    rows: string[][];
}

export function parseCsv(text: string, source = "<csv>"): Table {
    const lines = text
        .split(/\r?\n/)
        .filter((line) => line.trim().length > 0);
    if (lines.length === 0) {
        throw new SchemaMismatch(`${source} is empty`);
    }
    const header = lines[0].split(",").map((h) => h.trim());
    const rows = lines.slice(1).map((line) => line.split(","));
    if (rows.length === 0) {
        throw new SchemaMismatch(`${source} has a header but no data rows`);
    }
    return { header, rows };
}

export function readTable(path: string): Table {
    let text: string;
    try {
        text = readFileSync(path, "utf-8");
    } catch (err) {
        throw new SchemaMismatch(`cannot read ${path}: ${(err as Error).message}`);
    }
    return parseCsv(text, path);
}

/** Extract named columns as numbers; order follows `names`. */
export function numericColumns(
    table: Table,
    names: string[],
    source = "<csv>",
): number[][] {
    const indices = names.map((name) => {
        const idx = table.header.indexOf(name);
        if (idx < 0) {
            throw new SchemaMismatch(
                `${source} lacks required column '${name}' ` +
                `(header: ${table.header.join(",")})`,
            );
        }
        return idx;
    });
    return names.map((name, j) =>
        table.rows.map((row, i) => {
            const raw = row[indices[j]];
            const value = Number(raw);
            if (raw === undefined || raw.trim() === "" || Number.isNaN(value)) {
                throw new SchemaMismatch(
                    `${source} row ${i + 1}: column '${name}' is not numeric (${raw})`,
                );
            }
            return value;
        }),
    );
}

/** Whole table as a square numeric matrix (similarity reports). */
export function squareMatrix(table: Table, source = "<csv>"): number[][] {
    const k = table.header.length;
    if (table.rows.length !== k) {
        throw new SchemaMismatch(
            `${source} is not square: ${table.rows.length} rows x ${k} columns`,
        );
    }
    return table.rows.map((row, i) => {
        if (row.length !== k) {
            throw new SchemaMismatch(
                `${source} row ${i + 1} has ${row.length} fields, expected ${k}`,
            );
        }
        return row.map((raw, j) => {
            const value = Number(raw);
            if (raw.trim() === "" || Number.isNaN(value)) {
                throw new SchemaMismatch(
                    `${source} row ${i + 1}, column ${j}: not numeric (${raw})`,
                );
            }
            return value;
        });
    });
}
