/* tslint:disable */
/* eslint-disable */

export class ChaosDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Normalized autocorrelation for lags 0..10 ns, one per `dt_ns`.
     */
    readonly autocorr: Float64Array;
    readonly dt_ns: number;
    /**
     * Entropy per 5-bit symbol; NaN when the key is too short to estimate.
     */
    readonly entropy5: number;
    readonly gate_lag_ns: number;
    readonly gate_max: number;
    readonly gate_pass: boolean;
    readonly key_bits: number;
    readonly key_preview: string;
    readonly lag1_r: number;
    readonly monobit_p: number;
    /**
     * Intensity (mW) over the first 20 ns.
     */
    readonly trace: Float64Array;
}

export class LinkDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly ber_cipher: number;
    readonly ber_key: number;
    readonly ber_plaintext: number;
    readonly bits: number;
    readonly ciphertext: string;
    readonly decrypted: string;
    readonly eye_cols: number;
    /**
     * Eye of the ciphertext laser output: row-major, top row highest,
     * scaled to 0..1.
     */
    readonly eye_ld: Float64Array;
    readonly eye_rows: number;
    /**
     * Eye of the filtered ciphertext channel at the receiver.
     */
    readonly eye_rx: Float64Array;
    readonly plaintext: string;
    readonly q_ld_output: number;
    readonly q_sampled: number;
    readonly rx_dt_ns: number;
    /**
     * Received ciphertext voltage over the first 32 bits.
     */
    readonly rx_trace: Float64Array;
}

export class TextDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly cipher_hex: string;
    readonly decrypted: string;
    readonly key_hex: string;
}

/**
 * Integrates the feedback laser at feedback strength `kappa` and extracts a
 * key from `duration_ns` of its output.
 */
export function chaos_demo(kappa: number, duration_ns: number, seed: number): ChaosDemo;

/**
 * Encrypts UTF-8 text with a fresh chaotic key and decrypts it again.
 */
export function encrypt_text(text: string, seed: number): TextDemo;

/**
 * Sends `bits` PRBS bits through the encrypted back-to-back link with
 * receiver noise of `noise_mv` (per simulation sample).
 */
export function link_demo(bits: number, noise_mv: number, seed: number): LinkDemo;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_chaosdemo_free: (a: number, b: number) => void;
    readonly __wbg_linkdemo_free: (a: number, b: number) => void;
    readonly __wbg_textdemo_free: (a: number, b: number) => void;
    readonly chaos_demo: (a: number, b: number, c: number) => [number, number, number];
    readonly chaosdemo_autocorr: (a: number) => [number, number];
    readonly chaosdemo_dt_ns: (a: number) => number;
    readonly chaosdemo_entropy5: (a: number) => number;
    readonly chaosdemo_gate_lag_ns: (a: number) => number;
    readonly chaosdemo_gate_max: (a: number) => number;
    readonly chaosdemo_gate_pass: (a: number) => number;
    readonly chaosdemo_key_bits: (a: number) => number;
    readonly chaosdemo_key_preview: (a: number) => [number, number];
    readonly chaosdemo_lag1_r: (a: number) => number;
    readonly chaosdemo_monobit_p: (a: number) => number;
    readonly chaosdemo_trace: (a: number) => [number, number];
    readonly encrypt_text: (a: number, b: number, c: number) => [number, number, number];
    readonly link_demo: (a: number, b: number, c: number) => [number, number, number];
    readonly linkdemo_ber_cipher: (a: number) => number;
    readonly linkdemo_ber_key: (a: number) => number;
    readonly linkdemo_ber_plaintext: (a: number) => number;
    readonly linkdemo_bits: (a: number) => number;
    readonly linkdemo_ciphertext: (a: number) => [number, number];
    readonly linkdemo_decrypted: (a: number) => [number, number];
    readonly linkdemo_eye_cols: (a: number) => number;
    readonly linkdemo_eye_ld: (a: number) => [number, number];
    readonly linkdemo_eye_rows: (a: number) => number;
    readonly linkdemo_eye_rx: (a: number) => [number, number];
    readonly linkdemo_plaintext: (a: number) => [number, number];
    readonly linkdemo_q_ld_output: (a: number) => number;
    readonly linkdemo_q_sampled: (a: number) => number;
    readonly linkdemo_rx_dt_ns: (a: number) => number;
    readonly linkdemo_rx_trace: (a: number) => [number, number];
    readonly textdemo_cipher_hex: (a: number) => [number, number];
    readonly textdemo_decrypted: (a: number) => [number, number];
    readonly textdemo_key_hex: (a: number) => [number, number];
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
