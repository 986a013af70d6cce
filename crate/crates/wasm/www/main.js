import init, { extraction_curve, negativity_sweep, offdiagonal_profile } from "./pkg/odlro_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function records(flat, width) {
  const out = [];
  for (let i = 0; i + width <= flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

// series: [{ points: [[x, y]], color, dashed, dots }]
function plot(canvas, series, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 40;
  ctx.clearRect(0, 0, W, H);
  const all = series.flatMap((s) => s.points).filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y));
  if (all.length === 0) return;
  let [x0, x1] = [Math.min(...all.map((p) => p[0])), Math.max(...all.map((p) => p[0]))];
  let [y0, y1] = [Math.min(0, ...all.map((p) => p[1])), Math.max(...all.map((p) => p[1]))];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) y1 = y0 + 1;
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (W - 2 * pad);
  const sy = (y) => H - pad - ((y - y0) / (y1 - y0)) * (H - 2 * pad);

  ctx.strokeStyle = "#888";
  ctx.setLineDash([]);
  ctx.beginPath();
  ctx.moveTo(pad, pad); ctx.lineTo(pad, H - pad); ctx.lineTo(W - pad, H - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.fillText(xlabel, W / 2, H - 8);
  ctx.fillText(ylabel, 4, pad - 12);
  ctx.fillText(x0.toPrecision(3), pad, H - pad + 14);
  ctx.fillText(x1.toPrecision(3), W - pad - 20, H - pad + 14);
  ctx.fillText(y1.toPrecision(3), 2, pad + 4);
  ctx.fillText(y0.toPrecision(3), 2, H - pad);

  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    ctx.setLineDash(s.dashed ? [5, 4] : []);
    if (s.dots) {
      for (const [x, y] of s.points) {
        ctx.beginPath();
        ctx.arc(sx(x), sy(y), 2.5, 0, 2 * Math.PI);
        ctx.fill();
      }
    } else {
      ctx.beginPath();
      s.points.forEach(([x, y], i) => (i ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
      ctx.stroke();
    }
  }
}

function drawExtraction() {
  const rows = records(extraction_curve(num("ext-steps")), 3);
  plot($("ext-plot"), [
    { points: rows.map((r) => [r[0], r[1]]), color: "#1f5fa8" },
    { points: rows.map((r) => [r[0], r[2]]), color: "#d2691e", dots: true },
  ], "g", "negativity");
}

function drawSweep() {
  $("sw-err").textContent = "";
  try {
    const dim = num("sw-dim");
    const rows = records(
      negativity_sweep(dim, num("sw-cutoff"), num("sw-n"), num("sw-a"), num("sw-b"),
                       num("sw-tmin"), num("sw-tmax"), num("sw-steps")),
      4,
    );
    const x = (r) => (dim === 3 ? r[1] : r[0]);
    plot($("sw-plot"), [
      { points: rows.map((r) => [x(r), r[3]]), color: "#1f5fa8" },
      { points: rows.map((r) => [x(r), 0.5 * r[2]]), color: "#2e8b57", dashed: true },
    ], dim === 3 ? "T / Tc" : "T", "negativity");
  } catch (e) {
    $("sw-err").textContent = String(e);
  }
}

function drawProfile() {
  $("od-err").textContent = "";
  $("od-tval").textContent = $("od-t").value;
  try {
    const rows = records(offdiagonal_profile(num("od-dim"), num("od-cutoff"), num("od-n"), num("od-t")), 2);
    plot($("od-plot"), [{ points: rows, color: "#8b1a8b" }], "|x - x'|", "rho1 V");
  } catch (e) {
    $("od-err").textContent = String(e);
  }
}

await init();
$("ext-run").onclick = drawExtraction;
$("sw-run").onclick = drawSweep;
$("od-t").oninput = drawProfile;
for (const id of ["od-dim", "od-cutoff", "od-n"]) $(id).onchange = drawProfile;
drawExtraction();
drawSweep();
drawProfile();
