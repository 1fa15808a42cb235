#!/usr/bin/env node
/**
 * Figure generation from tlnmf CSV outputs.
 *
 * Usage:
 *   node dist/main.js convergence <csv> [<csv> ...] -o out.svg
 *   node dist/main.js energy <learned.csv> <dct.csv> <random.csv> -o out.svg
 *   node dist/main.js similarity <similarity.csv> -o out.svg
 *
 * Exit codes: 0 success, 2 schema mismatch or bad usage, 1 other errors.
 */

import { plotConvergence } from "./convergence.js";
import { plotEnergyCdf } from "./energy.js";
import { plotSimilarity } from "./similarity.js";
import { SchemaMismatch } from "./csv.js";

const USAGE = `usage:
  convergence <csv> [<csv> ...] -o out.svg
  energy <learned.csv> <dct.csv> <random.csv> -o out.svg
  similarity <similarity.csv> -o out.svg`;

interface Parsed {
    command: string;
    inputs: string[];
    output: string;
}

function parseArgs(argv: string[]): Parsed {
    const [command, ...rest] = argv;
    if (!command) {
        throw new SchemaMismatch(`missing command\n${USAGE}`);
    }
    const inputs: string[] = [];
    let output = "";
    for (let i = 0; i < rest.length; i++) {
        if (rest[i] === "-o" || rest[i] === "--out") {
            output = rest[++i] ?? "";
        } else {
            inputs.push(rest[i]);
        }
    }
    if (!output) {
        throw new SchemaMismatch(`missing -o <output.svg>\n${USAGE}`);
    }
    return { command, inputs, output };
}

export function main(argv: string[]): number {
    try {
        const { command, inputs, output } = parseArgs(argv);
        switch (command) {
            case "convergence":
                if (inputs.length < 1) {
                    throw new SchemaMismatch("convergence needs at least one CSV");
                }
                plotConvergence(inputs, output);
                break;
            case "energy":
                if (inputs.length !== 3) {
                    throw new SchemaMismatch(
                        "energy needs exactly three CSVs: learned, dct, random",
                    );
                }
                plotEnergyCdf(inputs[0], inputs[1], inputs[2], output);
                break;
            case "similarity":
                if (inputs.length !== 1) {
                    throw new SchemaMismatch("similarity needs exactly one CSV");
                }
                plotSimilarity(inputs[0], output);
                break;
            default:
                throw new SchemaMismatch(`unknown command '${command}'\n${USAGE}`);
        }
        return 0;
    } catch (err) {
        if (err instanceof SchemaMismatch) {
            console.error(`schema mismatch: ${err.message}`);
            return 2;
        }
        console.error(`error: ${(err as Error).message}`);
        return 1;
    }
}

process.exitCode = main(process.argv.slice(2));
