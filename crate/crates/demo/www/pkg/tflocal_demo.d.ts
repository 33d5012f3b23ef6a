/* tslint:disable */
/* eslint-disable */

/**
 * Eigenvalues `P(n+1, pi R^2)` of the disk of radius `radius`, `n < size`.
 */
export function disk_spectrum(radius: number, size: number): Float64Array;

/**
 * `|V_phi h_n|` on a `cells x cells` grid over `[-extent, extent]^2`, row
 * major with `xi` decreasing down the rows, normalized to a peak of 1.
 */
export function hermite_tf_magnitude(n: number, cells: number, extent: number): Float64Array;

/**
 * Builds the hidden domain named by `shape` ("disk", "annulus", "square",
 * "offset_disk") with size parameter `param`, hides its operator behind a
 * black box and returns the probe report as JSON.
 */
export function probe_shape(shape: string, param: number, size: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly disk_spectrum: (a: number, b: number) => [number, number, number, number];
    readonly hermite_tf_magnitude: (a: number, b: number, c: number) => [number, number];
    readonly probe_shape: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
