/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_chaosdemo_free: (a: number, b: number) => void;
export const __wbg_linkdemo_free: (a: number, b: number) => void;
export const __wbg_textdemo_free: (a: number, b: number) => void;
export const chaos_demo: (a: number, b: number, c: number) => [number, number, number];
export const chaosdemo_autocorr: (a: number) => [number, number];
export const chaosdemo_dt_ns: (a: number) => number;
export const chaosdemo_entropy5: (a: number) => number;
export const chaosdemo_gate_lag_ns: (a: number) => number;
export const chaosdemo_gate_max: (a: number) => number;
export const chaosdemo_gate_pass: (a: number) => number;
export const chaosdemo_key_bits: (a: number) => number;
export const chaosdemo_key_preview: (a: number) => [number, number];
export const chaosdemo_lag1_r: (a: number) => number;
export const chaosdemo_monobit_p: (a: number) => number;
export const chaosdemo_trace: (a: number) => [number, number];
export const encrypt_text: (a: number, b: number, c: number) => [number, number, number];
export const link_demo: (a: number, b: number, c: number) => [number, number, number];
export const linkdemo_ber_cipher: (a: number) => number;
export const linkdemo_ber_key: (a: number) => number;
export const linkdemo_ber_plaintext: (a: number) => number;
export const linkdemo_bits: (a: number) => number;
export const linkdemo_ciphertext: (a: number) => [number, number];
export const linkdemo_decrypted: (a: number) => [number, number];
export const linkdemo_eye_cols: (a: number) => number;
export const linkdemo_eye_ld: (a: number) => [number, number];
export const linkdemo_eye_rows: (a: number) => number;
export const linkdemo_eye_rx: (a: number) => [number, number];
export const linkdemo_plaintext: (a: number) => [number, number];
export const linkdemo_q_ld_output: (a: number) => number;
export const linkdemo_q_sampled: (a: number) => number;
export const linkdemo_rx_dt_ns: (a: number) => number;
export const linkdemo_rx_trace: (a: number) => [number, number];
export const textdemo_cipher_hex: (a: number) => [number, number];
export const textdemo_decrypted: (a: number) => [number, number];
export const textdemo_key_hex: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
