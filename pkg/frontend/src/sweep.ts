// Flat clustering from a reachability ordering at a threshold. The loop is
// a lockstep port of the library's extract_eps_cut and must stay that way:
// the cross-language fixture tests compare label arrays element-wise.

import { OrderingDocument } from "./ordering.js";

export interface SweepResult {
    labels: Int32Array;       // by point id, -1 = noise
    orderLabels: Int32Array;  // same labels by order position, for drawing
    numClusters: number;
    noiseCount: number;
    clusterSizes: number[];
}

export function sweepEps(doc: OrderingDocument, epsCut: number): SweepResult {
    if (epsCut > doc.params.eps) {
        throw new Error(
            `eps_cut ${epsCut} exceeds the ordering's eps ${doc.params.eps}`
        );
    }
    const n = doc.entries.length;
    const labels = new Int32Array(n).fill(-1);
    const orderLabels = new Int32Array(n).fill(-1);
    let current = -1;
    let count = 0;
    for (let i = 0; i < n; i++) {
        const e = doc.entries[i];
        if (e.reach > epsCut) {
            if (e.core <= epsCut) {
                current = count;
                count += 1;
                labels[e.id] = current;
            } else {
                current = -1;
            }
        } else {
            // joins the open cluster; stays noise if none is open
            labels[e.id] = current;
        }
        orderLabels[i] = labels[e.id];
    }

    const clusterSizes = new Array(count).fill(0);
    let noiseCount = 0;
    for (let i = 0; i < n; i++) {
        if (labels[i] < 0) noiseCount += 1;
        else clusterSizes[labels[i]] += 1;
    }
    return { labels, orderLabels, numClusters: count, noiseCount, clusterSizes };
}

export interface ClampedCut {
    value: number;
    clamped: boolean;
}

// Slider values can overshoot the ordering's radius; the sweep itself is
// strict, so out-of-range requests are clamped and flagged for the UI.
export function clampCut(doc: OrderingDocument, epsCut: number): ClampedCut {
    if (epsCut > doc.params.eps) return { value: doc.params.eps, clamped: true };
    if (epsCut < 0 || !isFinite(epsCut)) return { value: 0, clamped: true };
    return { value: epsCut, clamped: false };
}

export interface ConfigFragment {
    eps: number;
    min_pts: number;
    dist: string;
}

// Ready-to-run flags for the CLI once the analyst settles on a cut.
export function exportConfig(doc: OrderingDocument, epsCut: number): ConfigFragment {
    return {
        eps: epsCut,
        min_pts: doc.params.min_pts,
        dist: doc.params.measure,
    };
}
