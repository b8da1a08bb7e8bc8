import init, { display_duplicates, collection_curve, completion_histogram } from "./pkg/stickersim_wasm.js";

const $ = (id) => document.getElementById(id);
const preset = () => $("preset").value;
const seed = () => Number($("seed").value) >>> 0;

function plot(canvas, xs, ys, { bars = false, hline = null } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  if (xs.length === 0) return;
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const y1 = Math.max(...ys, hline ?? 0) * 1.05 || 1;
  const sx = (x) => pad + (x1 === x0 ? 0.5 : (x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - (y / y1) * (h - 2 * pad);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad); ctx.lineTo(pad, h - pad); ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText(String(x0), pad, h - pad + 16);
  ctx.fillText(String(x1), w - pad - 24, h - pad + 16);
  ctx.fillText(String(Math.round(y1)), 4, pad + 4);
  ctx.strokeStyle = ctx.fillStyle = "#2a6fb0";
  if (bars) {
    const bw = Math.max(1, (w - 2 * pad) / (x1 - x0 + 1) - 1);
    xs.forEach((x, i) => ctx.fillRect(sx(x) - bw / 2, sy(ys[i]), bw, h - pad - sy(ys[i])));
  } else {
    ctx.beginPath();
    xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
    ctx.stroke();
  }
  if (hline !== null) {
    ctx.strokeStyle = "#c33";
    ctx.setLineDash([5, 4]);
    ctx.beginPath(); ctx.moveTo(pad, sy(hline)); ctx.lineTo(w - pad, sy(hline)); ctx.stroke();
    ctx.setLineDash([]);
  }
}

function guarded(out, f) {
  return () => {
    out.classList.remove("err");
    try { f(); } catch (e) { out.textContent = String(e.message ?? e); out.classList.add("err"); }
  };
}

$("run-displays").onclick = guarded($("displays-out"), () => {
  const r = JSON.parse(display_duplicates(preset(), $("mix").value, Number($("displays").value), seed()));
  plot($("displays-plot"), r.duplicates.map((_, i) => i + 1), r.duplicates, { hline: r.classical_expectation });
  $("displays-out").textContent =
    `${r.mix}: mean ${r.mean.toFixed(2)} duplicates per display, max ${r.max}; ` +
    `random packets would give ${r.classical_expectation.toFixed(2)} (dashed)`;
});

$("run-curve").onclick = guarded($("curve-out"), () => {
  const r = JSON.parse(collection_curve(preset(), seed()));
  plot($("curve-plot"), r.points.map((p) => p[0]), r.points.map((p) => p[1]), { hline: r.target });
  const last = r.points[r.points.length - 1];
  $("curve-out").textContent =
    `${r.cards_to_target} cards for ${r.target} stickers (dashed), ` +
    `${last[0]} packets for all ${r.album_size}`;
});

$("run-hist").onclick = guarded($("hist-out"), () => {
  const r = JSON.parse(completion_histogram(preset(), Number($("runs").value), seed()));
  plot($("hist-plot"), r.bins.map((b) => b[0]), r.bins.map((b) => b[1]), { bars: true });
  $("hist-out").textContent =
    `${r.runs} collections to ${r.target} stickers: mean ${r.mean.toFixed(1)}, sd ${r.std.toFixed(1)}, ` +
    `skewness ${r.skewness?.toFixed(3)}, range ${r.min}-${r.max}`;
});

await init();
