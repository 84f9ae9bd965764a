/* @ts-self-types="./photocipher_web.d.ts" */

export class ChaosDemo {
    static __wrap(ptr) {
        const obj = Object.create(ChaosDemo.prototype);
        obj.__wbg_ptr = ptr;
        ChaosDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ChaosDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_chaosdemo_free(ptr, 0);
    }
    /**
     * Normalized autocorrelation for lags 0..10 ns, one per `dt_ns`.
     * @returns {Float64Array}
     */
    get autocorr() {
        const ret = wasm.chaosdemo_autocorr(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get dt_ns() {
        const ret = wasm.chaosdemo_dt_ns(this.__wbg_ptr);
        return ret;
    }
    /**
     * Entropy per 5-bit symbol; NaN when the key is too short to estimate.
     * @returns {number}
     */
    get entropy5() {
        const ret = wasm.chaosdemo_entropy5(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gate_lag_ns() {
        const ret = wasm.chaosdemo_gate_lag_ns(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get gate_max() {
        const ret = wasm.chaosdemo_gate_max(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {boolean}
     */
    get gate_pass() {
        const ret = wasm.chaosdemo_gate_pass(this.__wbg_ptr);
        return ret !== 0;
    }
    /**
     * @returns {number}
     */
    get key_bits() {
        const ret = wasm.chaosdemo_key_bits(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {string}
     */
    get key_preview() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.chaosdemo_key_preview(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {number}
     */
    get lag1_r() {
        const ret = wasm.chaosdemo_lag1_r(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get monobit_p() {
        const ret = wasm.chaosdemo_monobit_p(this.__wbg_ptr);
        return ret;
    }
    /**
     * Intensity (mW) over the first 20 ns.
     * @returns {Float64Array}
     */
    get trace() {
        const ret = wasm.chaosdemo_trace(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) ChaosDemo.prototype[Symbol.dispose] = ChaosDemo.prototype.free;

export class LinkDemo {
    static __wrap(ptr) {
        const obj = Object.create(LinkDemo.prototype);
        obj.__wbg_ptr = ptr;
        LinkDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        LinkDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_linkdemo_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get ber_cipher() {
        const ret = wasm.linkdemo_ber_cipher(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get ber_key() {
        const ret = wasm.linkdemo_ber_key(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get ber_plaintext() {
        const ret = wasm.linkdemo_ber_plaintext(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get bits() {
        const ret = wasm.linkdemo_bits(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {string}
     */
    get ciphertext() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.linkdemo_ciphertext(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {string}
     */
    get decrypted() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.linkdemo_decrypted(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {number}
     */
    get eye_cols() {
        const ret = wasm.linkdemo_eye_cols(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Eye of the ciphertext laser output: row-major, top row highest,
     * scaled to 0..1.
     * @returns {Float64Array}
     */
    get eye_ld() {
        const ret = wasm.linkdemo_eye_ld(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get eye_rows() {
        const ret = wasm.linkdemo_eye_rows(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * Eye of the filtered ciphertext channel at the receiver.
     * @returns {Float64Array}
     */
    get eye_rx() {
        const ret = wasm.linkdemo_eye_rx(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {string}
     */
    get plaintext() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.linkdemo_plaintext(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {number}
     */
    get q_ld_output() {
        const ret = wasm.linkdemo_q_ld_output(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get q_sampled() {
        const ret = wasm.linkdemo_q_sampled(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get rx_dt_ns() {
        const ret = wasm.linkdemo_rx_dt_ns(this.__wbg_ptr);
        return ret;
    }
    /**
     * Received ciphertext voltage over the first 32 bits.
     * @returns {Float64Array}
     */
    get rx_trace() {
        const ret = wasm.linkdemo_rx_trace(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) LinkDemo.prototype[Symbol.dispose] = LinkDemo.prototype.free;

export class TextDemo {
    static __wrap(ptr) {
        const obj = Object.create(TextDemo.prototype);
        obj.__wbg_ptr = ptr;
        TextDemoFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        TextDemoFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_textdemo_free(ptr, 0);
    }
    /**
     * @returns {string}
     */
    get cipher_hex() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.textdemo_cipher_hex(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {string}
     */
    get decrypted() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.textdemo_decrypted(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
    /**
     * @returns {string}
     */
    get key_hex() {
        let deferred1_0;
        let deferred1_1;
        try {
            const ret = wasm.textdemo_key_hex(this.__wbg_ptr);
            deferred1_0 = ret[0];
            deferred1_1 = ret[1];
            return getStringFromWasm0(ret[0], ret[1]);
        } finally {
            wasm.__wbindgen_free(deferred1_0, deferred1_1, 1);
        }
    }
}
if (Symbol.dispose) TextDemo.prototype[Symbol.dispose] = TextDemo.prototype.free;

/**
 * Integrates the feedback laser at feedback strength `kappa` and extracts a
 * key from `duration_ns` of its output.
 * @param {number} kappa
 * @param {number} duration_ns
 * @param {number} seed
 * @returns {ChaosDemo}
 */
export function chaos_demo(kappa, duration_ns, seed) {
    const ret = wasm.chaos_demo(kappa, duration_ns, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return ChaosDemo.__wrap(ret[0]);
}

/**
 * Encrypts UTF-8 text with a fresh chaotic key and decrypts it again.
 * @param {string} text
 * @param {number} seed
 * @returns {TextDemo}
 */
export function encrypt_text(text, seed) {
    const ptr0 = passStringToWasm0(text, wasm.__wbindgen_malloc, wasm.__wbindgen_realloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.encrypt_text(ptr0, len0, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return TextDemo.__wrap(ret[0]);
}

/**
 * Sends `bits` PRBS bits through the encrypted back-to-back link with
 * receiver noise of `noise_mv` (per simulation sample).
 * @param {number} bits
 * @param {number} noise_mv
 * @param {number} seed
 * @returns {LinkDemo}
 */
export function link_demo(bits, noise_mv, seed) {
    const ret = wasm.link_demo(bits, noise_mv, seed);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return LinkDemo.__wrap(ret[0]);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_generic_0000000000000001: function(arg0, arg1) {
            // Cast intrinsic for `Ref(String) -> Externref`.
            const ret = getStringFromWasm0(arg0, arg1);
            return ret;
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./photocipher_web_bg.js": import0,
    };
}

const ChaosDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_chaosdemo_free(ptr, 1));
const LinkDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_linkdemo_free(ptr, 1));
const TextDemoFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_textdemo_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function passStringToWasm0(arg, malloc, realloc) {
    if (realloc === undefined) {
        const buf = cachedTextEncoder.encode(arg);
        const ptr = malloc(buf.length, 1) >>> 0;
        getUint8ArrayMemory0().subarray(ptr, ptr + buf.length).set(buf);
        WASM_VECTOR_LEN = buf.length;
        return ptr;
    }

    let len = arg.length;
    let ptr = malloc(len, 1) >>> 0;

    const mem = getUint8ArrayMemory0();

    let offset = 0;

    for (; offset < len; offset++) {
        const code = arg.charCodeAt(offset);
        if (code > 0x7F) break;
        mem[ptr + offset] = code;
    }
    if (offset !== len) {
        if (offset !== 0) {
            arg = arg.slice(offset);
        }
        ptr = realloc(ptr, len, len = offset + arg.length * 3, 1) >>> 0;
        const view = getUint8ArrayMemory0().subarray(ptr + offset, ptr + len);
        const ret = cachedTextEncoder.encodeInto(arg, view);

        offset += ret.written;
        ptr = realloc(ptr, len, offset, 1) >>> 0;
    }

    WASM_VECTOR_LEN = offset;
    return ptr;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

const cachedTextEncoder = new TextEncoder();

if (!('encodeInto' in cachedTextEncoder)) {
    cachedTextEncoder.encodeInto = function (arg, view) {
        const buf = cachedTextEncoder.encode(arg);
        view.set(buf);
        return {
            read: arg.length,
            written: buf.length
        };
    };
}

let WASM_VECTOR_LEN = 0;

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('photocipher_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
