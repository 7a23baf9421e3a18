/* tslint:disable */
/* eslint-disable */

/**
 * A synthesized gate held on the wasm side.
 */
export class Design {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Smallest and largest band the sweep accepts.
     */
    band_limits(): Uint32Array;
    /**
     * Drive phases of modulator `stage`, one per time sample.
     */
    drive(stage: number): Float64Array;
    feasible(): boolean;
    fidelity(): number;
    modes(): number;
    probability(): number;
    /**
     * Drive spectrum of modulator `stage` in dB, harmonics `1..=M/2`.
     */
    spectrum(stage: number): Float64Array;
    stages(): number;
    /**
     * Flattened `[band, F, P]` triples for bands `min, min + step, …, max`.
     */
    sweep(min: number, max: number, step: number): Float64Array;
}

/**
 * Power in each sideband `k = -half..=half` of a sinusoidally driven
 * modulator.
 */
export function couplings(depth: number, modes: number, half: number): Float64Array;

export function synthesize(gate: string, modes: number, stages: number, restarts: number, seed: number): Design;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_design_free: (a: number, b: number) => void;
    readonly couplings: (a: number, b: number, c: number) => [number, number, number, number];
    readonly design_band_limits: (a: number) => [number, number];
    readonly design_drive: (a: number, b: number) => [number, number];
    readonly design_feasible: (a: number) => number;
    readonly design_fidelity: (a: number) => number;
    readonly design_modes: (a: number) => number;
    readonly design_probability: (a: number) => number;
    readonly design_spectrum: (a: number, b: number) => [number, number, number, number];
    readonly design_stages: (a: number) => number;
    readonly design_sweep: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly synthesize: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
