/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_design_free: (a: number, b: number) => void;
export const couplings: (a: number, b: number, c: number) => [number, number, number, number];
export const design_band_limits: (a: number) => [number, number];
export const design_drive: (a: number, b: number) => [number, number];
export const design_feasible: (a: number) => number;
export const design_fidelity: (a: number) => number;
export const design_modes: (a: number) => number;
export const design_probability: (a: number) => number;
export const design_spectrum: (a: number, b: number) => [number, number, number, number];
export const design_stages: (a: number) => number;
export const design_sweep: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const synthesize: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
