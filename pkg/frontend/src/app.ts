// Page wiring: file picker -> parse -> bar chart + slider sweep + export.
// All clustering logic lives in sweep.ts; this file only draws and reacts.

import { OrderingDocument, parseOrdering } from "./ordering.js";
import { ClampedCut, SweepResult, clampCut, exportConfig, sweepEps } from "./sweep.js";

const PALETTE = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
    "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];
const NOISE_COLOR = "#c8c8c8";
const ABOVE_CUT_COLOR = "#888888";
const INF_COLOR = "#d62728";

let doc: OrderingDocument | null = null;

const el = {
    file: document.getElementById("file") as HTMLInputElement,
    slider: document.getElementById("cut") as HTMLInputElement,
    cutLabel: document.getElementById("cut-value") as HTMLElement,
    canvas: document.getElementById("plot") as HTMLCanvasElement,
    summary: document.getElementById("summary") as HTMLElement,
    notice: document.getElementById("notice") as HTMLElement,
    exportBtn: document.getElementById("export") as HTMLButtonElement,
    fragment: document.getElementById("fragment") as HTMLElement,
};

function notice(msg: string) {
    el.notice.textContent = msg;
}

function fmt(x: number): string {
    return x.toPrecision(4);
}

function currentCut(): ClampedCut {
    // cast is safe: update() never runs without a document
    const d = doc as OrderingDocument;
    const t = parseFloat(el.slider.value); // slider is 0..1000
    return clampCut(d, (t / 1000) * d.params.eps);
}

function drawPlot(d: OrderingDocument, cut: number, sweep: SweepResult) {
    const ctx = el.canvas.getContext("2d");
    if (!ctx) return;
    const W = el.canvas.width;
    const H = el.canvas.height;
    ctx.clearRect(0, 0, W, H);

    const n = d.entries.length;
    let maxFinite = 0;
    for (const e of d.entries) {
        if (isFinite(e.reach) && e.reach > maxFinite) maxFinite = e.reach;
    }
    if (maxFinite === 0) maxFinite = d.params.eps;
    const cap = 1.05 * maxFinite;
    const yOf = (r: number) => H - (Math.min(r, cap) / cap) * (H - 12);

    // one bar per pixel column: tallest entry in the column wins, so
    // 100k-entry plots stay O(width) to draw
    const perPixel = Math.max(1, Math.ceil(n / W));
    for (let px = 0, i = 0; i < n; px++, i += perPixel) {
        const end = Math.min(n, i + perPixel);
        let top = -1;
        let hasInf = false;
        for (let j = i; j < end; j++) {
            const r = d.entries[j].reach;
            if (!isFinite(r)) hasInf = true;
            else if (r > top) top = r;
        }
        const x = (i / n) * W;
        const w = Math.max(1, (W * perPixel) / n);
        if (hasInf) {
            ctx.fillStyle = INF_COLOR;
            ctx.fillRect(x, yOf(cap), w, H - yOf(cap));
        }
        if (top >= 0) {
            const label = sweep.orderLabels[i];
            ctx.fillStyle =
                top > cut ? ABOVE_CUT_COLOR
                    : label < 0 ? NOISE_COLOR
                        : PALETTE[label % PALETTE.length];
            ctx.fillRect(x, yOf(top), w, H - yOf(top));
        }
    }

    ctx.strokeStyle = "#000";
    ctx.setLineDash([6, 4]);
    ctx.beginPath();
    ctx.moveTo(0, yOf(cut));
    ctx.lineTo(W, yOf(cut));
    ctx.stroke();
    ctx.setLineDash([]);
}

function renderSummary(sweep: SweepResult, n: number) {
    const sizes = sweep.clusterSizes
        .map((s, i) => ({ s, i }))
        .sort((a, b) => b.s - a.s)
        .slice(0, 8)
        .map(({ s, i }) => `#${i}: ${s}`)
        .join(", ");
    el.summary.textContent =
        `${sweep.numClusters} clusters | noise ${sweep.noiseCount}/${n} ` +
        `(${((100 * sweep.noiseCount) / n).toFixed(1)}%)` +
        (sizes ? ` | largest ${sizes}` : "");
}

function update() {
    if (!doc) return;
    const cut = currentCut();
    el.cutLabel.textContent = fmt(cut.value);
    if (cut.clamped) notice(`cut clamped to [0, ${fmt(doc.params.eps)}]`);
    else notice("");
    const sweep = sweepEps(doc, cut.value);
    drawPlot(doc, cut.value, sweep);
    renderSummary(sweep, doc.entries.length);
}

let pending = 0;
function scheduleUpdate() {
    // debounce slider drags to one sweep per frame
    if (pending) return;
    pending = requestAnimationFrame(() => {
        pending = 0;
        update();
    });
}

el.file.addEventListener("change", async () => {
    const f = el.file.files && el.file.files[0];
    if (!f) return;
    try {
        doc = parseOrdering(await f.text());
    } catch (e) {
        doc = null;
        notice((e as Error).message);
        el.summary.textContent = "";
        return;
    }
    notice("");
    el.slider.disabled = false;
    el.exportBtn.disabled = false;
    el.slider.value = "1000"; // start at the full radius
    update();
});

el.slider.addEventListener("input", scheduleUpdate);

el.exportBtn.addEventListener("click", () => {
    if (!doc) return;
    const fragment = exportConfig(doc, currentCut().value);
    const text = JSON.stringify(fragment, null, 2);
    el.fragment.textContent = text;
    const blob = new Blob([text], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "sdbscan-config.json";
    a.click();
    URL.revokeObjectURL(a.href);
});
