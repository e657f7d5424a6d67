/* tslint:disable */
/* eslint-disable */

/**
 * Optimal and baseline splits for one rate pair. Rates are in Mbit/s.
 */
export function optimize(c_com_equiv_mbps: number, c_cpt_mbps: number, t_cc: number): string;

/**
 * Case map over a square rate grid from 0 to `max_rate_mbps`.
 */
export function region_map(t_cc: number, max_rate_mbps: number, steps: number): string;

/**
 * Segment-by-segment replay of the three schemes.
 */
export function replay(c_com_equiv_mbps: number, c_cpt_mbps: number, t_cc: number, horizon: number, truncate: boolean): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly optimize: (a: number, b: number, c: number) => [number, number];
    readonly region_map: (a: number, b: number, c: number) => [number, number];
    readonly replay: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
