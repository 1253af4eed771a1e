/* tslint:disable */
/* eslint-disable */

/**
 * Bin counts of an orbit of the logistic map `4x(1 - x)` on `(0, 1)`.
 */
export function logistic_histogram(seed: number, iterations: number, bins: number): string;

/**
 * Log weight products of the bilateral shift with weights `positive` on
 * indices `>= 1` and `nonpositive` on indices `<= 0`, at offset `q`.
 */
export function salas_curves(positive: number, nonpositive: number, horizon: number, q: number): string;

/**
 * Distances from `e_target` to `T^k(ball(e_base, delta))` for the constant
 * weighted backward shift `weight * B` on `l^2`, for `k = 1..=kmax`.
 */
export function shift_profile(weight: number, base: number, target: number, delta: number, kmax: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly logistic_histogram: (a: number, b: number, c: number) => [number, number, number, number];
    readonly salas_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly shift_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
