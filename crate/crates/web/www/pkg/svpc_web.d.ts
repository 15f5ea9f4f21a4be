/* tslint:disable */
/* eslint-disable */

/**
 * Certificate plus `Φ` and its envelope on a `count × count` grid over
 * `[-half, half]²`, as JSON; `+inf` samples are `null`.
 */
export function certify_model(name: string, params_json: string, half: number, count: number): string;

export function conjugate_slice(name: string, params_json: string, half: number, count: number, beta_half: number, beta_count: number, beta3: number): string;

/**
 * `Λ_β(ν)`, the largest lifted pairing over the signed permutations of `ν`.
 */
export function lambda(beta: Float64Array, nu: Float64Array): number;

/**
 * Catalog as JSON.
 */
export function models(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly certify_model: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly conjugate_slice: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly lambda: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly models: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
