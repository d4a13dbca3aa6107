// Load and validate ordering documents as emitted by the clustering CLI
// (soptics/exact-optics --out foo.json). JSON cannot carry infinities, so
// the writer encodes them as null; we decode back to Infinity here.

export interface OrderingParams {
    eps: number;
    min_pts: number;
    measure: string;
}

export interface OrderingEntry {
    order: number;
    id: number;
    reach: number; // Infinity when the point was unreachable
    core: number;  // Infinity when the point is not core
}

export interface OrderingDocument {
    params: OrderingParams;
    entries: OrderingEntry[];
}

function fail(msg: string): never {
    throw new Error(`ordering document: ${msg}`);
}

function decodeDistance(v: unknown, what: string, i: number): number {
    if (v === null) return Infinity;
    if (typeof v !== "number" || !isFinite(v) || v < 0) {
        fail(`entry ${i}: ${what} must be null or a non-negative number`);
    }
    return v;
}

export function parseOrdering(text: string): OrderingDocument {
    let raw: any;
    try {
        raw = JSON.parse(text);
    } catch (e) {
        fail(`not valid JSON (${(e as Error).message})`);
    }
    if (typeof raw !== "object" || raw === null) fail("top level must be an object");
    const p = raw.params;
    if (typeof p !== "object" || p === null) fail("missing params");
    if (typeof p.eps !== "number" || !(p.eps > 0)) fail("params.eps must be a positive number");
    if (!Number.isInteger(p.min_pts) || p.min_pts < 1) fail("params.min_pts must be a positive integer");
    if (typeof p.measure !== "string") fail("params.measure must be a string");

    if (!Array.isArray(raw.entries)) fail("entries must be an array");
    const n = raw.entries.length;
    const entries: OrderingEntry[] = new Array(n);
    const seen = new Uint8Array(n);
    for (let i = 0; i < n; i++) {
        const e = raw.entries[i];
        if (typeof e !== "object" || e === null) fail(`entry ${i}: must be an object`);
        if (e.order !== i) fail(`entry ${i}: order field is ${e.order}, expected file order`);
        if (!Number.isInteger(e.id) || e.id < 0 || e.id >= n) {
            fail(`entry ${i}: id must be an integer in [0, ${n})`);
        }
        if (seen[e.id]) fail(`entry ${i}: duplicate id ${e.id}`);
        seen[e.id] = 1;
        entries[i] = {
            order: i,
            id: e.id,
            reach: decodeDistance(e.reach, "reach", i),
            core: decodeDistance(e.core, "core", i),
        };
    }
    return {
        params: { eps: p.eps, min_pts: p.min_pts, measure: p.measure },
        entries,
    };
}
