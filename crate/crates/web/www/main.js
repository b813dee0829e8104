import init, { intercept_curve, cumulative_curve, trace_run } from "./pkg/quantum_dialogue_web.js";

const $ = (id) => document.getElementById(id);

function axes(ctx, w, h, pad, xLabel, xMax) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
  for (const y of [0, 0.25, 0.5, 0.75, 1]) {
    const py = h - pad - y * (h - 2 * pad);
    ctx.fillText(y.toFixed(2), 4, py + 4);
    ctx.strokeStyle = "#eee";
    ctx.beginPath();
    ctx.moveTo(pad, py);
    ctx.lineTo(w - pad, py);
    ctx.stroke();
  }
  ctx.fillText(xLabel, w - pad - 60, h - 8);
  ctx.fillText(xMax, w - pad - 10, h - pad + 14);
}

function drawCurve() {
  const phi = parseFloat($("phi").value);
  $("phi-val").textContent = phi.toFixed(2);
  const points = JSON.parse(intercept_curve(phi, $("legs").value, 48));
  const c = $("curve");
  const ctx = c.getContext("2d");
  const pad = 36;
  axes(ctx, c.width, c.height, pad, "θ (rad)", "π/2");
  const x = (t) => pad + (t / (Math.PI / 2)) * (c.width - 2 * pad);
  const y = (p) => c.height - pad - p * (c.height - 2 * pad);

  ctx.fillStyle = "rgba(40, 100, 200, 0.2)";
  ctx.beginPath();
  points.forEach((p, i) => (i ? ctx.lineTo(x(p.theta), y(p.max)) : ctx.moveTo(x(p.theta), y(p.max))));
  [...points].reverse().forEach((p) => ctx.lineTo(x(p.theta), y(p.min)));
  ctx.fill();

  ctx.strokeStyle = "#2864c8";
  ctx.lineWidth = 2;
  ctx.beginPath();
  points.forEach((p, i) => (i ? ctx.lineTo(x(p.theta), y(p.mean)) : ctx.moveTo(x(p.theta), y(p.mean))));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawCumulative() {
  const c = $("cumulative");
  const ctx = c.getContext("2d");
  const pad = 36;
  let rows;
  try {
    rows = JSON.parse(cumulative_curve(parseInt($("max-n").value, 10), parseFloat($("claimed").value)));
  } catch (e) {
    ctx.clearRect(0, 0, c.width, c.height);
    ctx.fillStyle = "#b00";
    ctx.fillText(String(e), 40, 40);
    return;
  }
  const n = rows.length;
  axes(ctx, c.width, c.height, pad, "N", String(n));
  const x = (k) => pad + ((k - 1) / Math.max(n - 1, 1)) * (c.width - 2 * pad);
  const y = (p) => c.height - pad - p * (c.height - 2 * pad);
  for (const [key, color, label] of [["p_correct", "#2864c8", "swept per-run value"], ["p_claimed", "#c83c28", "claimed per-run value"]]) {
    ctx.strokeStyle = color;
    ctx.fillStyle = color;
    ctx.beginPath();
    rows.forEach((r, i) => (i ? ctx.lineTo(x(r.n), y(r[key])) : ctx.moveTo(x(r.n), y(r[key]))));
    ctx.stroke();
    rows.forEach((r) => ctx.fillRect(x(r.n) - 2, y(r[key]) - 2, 4, 4));
    ctx.fillText(label, c.width - 200, key === "p_correct" ? c.height - pad - 24 : c.height - pad - 8);
  }
}

function runTrace() {
  const out = $("trace");
  out.classList.remove("err");
  try {
    const view = JSON.parse(
      trace_run($("initial").value, $("bob").value, $("alice").value, $("attack").value, $("trace-legs").value,
        parseInt($("seed").value, 10) >>> 0),
    );
    const t = view.transcript;
    const lines = view.steps.map((s, i) => `${i + 1}. ${s.description}\n   ${s.ket}`);
    lines.push("", `announced ${t.announced_outcome}, expected ${t.expected_outcome}, detected ${t.detected}`);
    out.textContent = lines.join("\n");
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

await init();
$("phi").addEventListener("input", drawCurve);
$("legs").addEventListener("change", drawCurve);
$("claimed").addEventListener("input", drawCumulative);
$("max-n").addEventListener("input", drawCumulative);
$("run").addEventListener("click", runTrace);
drawCurve();
drawCumulative();
runTrace();
