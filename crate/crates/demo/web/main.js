import init, { surface_info, spectrum, completion_trace } from "./pkg/hermcap_demo.js";

const $ = (id) => document.getElementById(id);

function params() {
  return {
    q: Number($("q").value),
    strategy: $("strategy").value,
    seedSize: Number($("seed-size").value),
  };
}

function guarded(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = e.message ?? String(e);
    }
  };
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
}

function drawHistogram(hist) {
  const canvas = $("histogram");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 34;
  axes(ctx, w, h, pad);
  const rows = hist.rows;
  const lo = rows[0].size;
  const hi = rows[rows.length - 1].size;
  const top = Math.max(...rows.map((r) => r.percent));
  const slot = (w - 1.5 * pad) / (hi - lo + 1);
  const ovoid = hist.q ** 3 + 1;
  for (const r of rows) {
    const x = pad + (r.size - lo) * slot;
    const bh = ((h - 1.5 * pad) * r.percent) / top;
    ctx.fillStyle = r.size === ovoid ? "#c0392b" : "#2e86c1";
    ctx.fillRect(x + 1, h - pad - bh, Math.max(slot - 2, 1), bh);
  }
  ctx.fillStyle = "#444";
  const step = Math.max(1, Math.ceil((hi - lo + 1) / 20));
  for (let s = lo; s <= hi; s += step) {
    ctx.fillText(String(s), pad + (s - lo) * slot, h - pad + 14);
  }
  ctx.fillText(`${top.toFixed(1)}%`, 2, pad / 2 + 8);
}

function drawTrace(trace) {
  const canvas = $("trace");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 34;
  axes(ctx, w, h, pad);
  const steps = trace.steps;
  if (steps.length === 0) return;
  const top = Math.max(...steps.map((s) => s.relevance), 1);
  const x = (i) => pad + ((w - 1.5 * pad) * i) / Math.max(steps.length - 1, 1);
  const y = (v) => h - pad - ((h - 1.5 * pad) * v) / top;

  ctx.strokeStyle = "#2e86c1";
  ctx.beginPath();
  steps.forEach((s, i) => (i ? ctx.lineTo(x(i), y(s.relevance)) : ctx.moveTo(x(i), y(s.relevance))));
  ctx.stroke();

  ctx.strokeStyle = "#27ae60";
  ctx.beginPath();
  let started = false;
  steps.forEach((s, i) => {
    if (s.r_max == null) return;
    started ? ctx.lineTo(x(i), y(s.r_max)) : ctx.moveTo(x(i), y(s.r_max));
    started = true;
  });
  ctx.stroke();

  ctx.fillStyle = "#444";
  ctx.fillText(String(top), 4, pad / 2 + 8);
  ctx.fillText("step", w - pad, h - pad + 14);
  ctx.fillStyle = "#2e86c1";
  ctx.fillText("relevance of the added point", pad + 8, pad / 2 + 8);
  ctx.fillStyle = "#27ae60";
  ctx.fillText("largest relevance left", pad + 200, pad / 2 + 8);
}

function showInfo() {
  const info = JSON.parse(surface_info(params().q));
  $("info").textContent =
    `points ${info.points}, |Gx| ${info.gx}, generators ${info.generators} ` +
    `(${info.points_per_generator} points each), ovoid size ${info.ovoid}`;
}

function runSpectrum() {
  const p = params();
  const runs = Number($("runs").value);
  const master = BigInt($("master").value);
  const t0 = performance.now();
  const hist = JSON.parse(spectrum(p.q, p.strategy, p.seedSize, runs, master));
  const mean = hist.rows.reduce((a, r) => a + r.size * r.count, 0) / hist.total_runs;
  const ovoid = hist.counts[String(p.q ** 3 + 1)] ?? 0;
  $("spectrum-summary").textContent =
    `mean ${mean.toFixed(2)}, ovoids ${ovoid}/${hist.total_runs}, ${(performance.now() - t0).toFixed(0)} ms`;
  drawHistogram(hist);
}

function runTrace() {
  const p = params();
  const trace = JSON.parse(completion_trace(p.q, p.strategy, p.seedSize, BigInt($("trace-seed").value)));
  $("trace-summary").textContent =
    `seed ${trace.seed_size} points → complete cap of size ${trace.final_size}` + (trace.is_ovoid ? " (ovoid)" : "");
  drawTrace(trace);
}

await init();
$("q").addEventListener("change", guarded(showInfo));
$("run-spectrum").addEventListener("click", guarded(runSpectrum));
$("run-trace").addEventListener("click", guarded(runTrace));
guarded(showInfo)();
