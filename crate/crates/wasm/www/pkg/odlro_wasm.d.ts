/* tslint:disable */
/* eslint-disable */

/**
 * Records `[g, closed form, eigensolver]` for `g = k pi / steps`.
 */
export function extraction_curve(steps: number): Float64Array;

/**
 * Records `[T, T / T_c or NaN, condensate fraction, negativity]` over a log
 * grid (in units of `T_c` for a 3D box).
 */
export function negativity_sweep(dimension: number, cutoff: number, particle_number: number, a: number, b: number, t_min: number, t_max: number, steps: number): Float64Array;

/**
 * Records `[separation, rho_1 V]` along the first axis at one temperature
 * (in units of `T_c` for a 3D box).
 */
export function offdiagonal_profile(dimension: number, cutoff: number, particle_number: number, t: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly extraction_curve: (a: number) => [number, number];
    readonly negativity_sweep: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly offdiagonal_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
