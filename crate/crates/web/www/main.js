// Built with: wasm-pack build crates/web --target web --out-dir www/pkg
import init, { mean_curve, monomial_decay, cyclicity } from "./pkg/hvlab_web.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  out.classList.remove("err");
  try {
    return f();
  } catch (e) {
    out.textContent = String(e);
    out.classList.add("err");
    return null;
  }
}

// points: [x, y] pairs; y on a log scale
function plot(canvas, points, marks) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const ys = points.map((p) => Math.log10(Math.max(p[1], 1e-300)));
  const xs = points.map((p) => p[0]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (x) => 30 + ((x - x0) / (x1 - x0 || 1)) * (w - 40);
  const sy = (y) => h - 20 - ((y - y0) / (y1 - y0 || 1)) * (h - 40);
  ctx.beginPath();
  points.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(xs[i]), sy(ys[i])));
  ctx.stroke();
  points.forEach((p, i) => {
    ctx.fillStyle = marks && !marks[i] ? "#c33" : "#236";
    ctx.fillRect(sx(xs[i]) - 2, sy(ys[i]) - 2, 4, 4);
  });
}

await init();

$("mean-run").onclick = () => {
  const out = $("mean-out");
  const v = show(out, () =>
    JSON.parse(mean_curve($("mean-f").value, +$("mean-p").value, +$("mean-order").value, +$("mean-depth").value)));
  if (!v) return;
  out.textContent = `safe radius ${v.safe_radius}\n` +
    v.points.map((p) => `${p.r.toFixed(6)}  ${p.mean.toExponential(12)}${p.certified ? "" : "  (uncertified)"}`).join("\n");
  plot($("mean-plot"), v.points.map((p, j) => [j + 1, p.mean]), v.points.map((p) => p.certified));
};

$("decay-run").onclick = () => {
  const out = $("decay-out");
  const v = show(out, () => JSON.parse(monomial_decay(+$("decay-n").value)));
  if (!v) return;
  out.textContent = v.columns.join("  ") + "\n" +
    v.rows.map((r) => r.map((x) => x.toExponential(6)).join("  ")).join("\n");
};

$("cyc-run").onclick = () => {
  const out = $("cyc-out");
  const v = show(out, () => JSON.parse(cyclicity($("cyc-s").value, +$("cyc-n").value)));
  if (!v) return;
  out.textContent = `condition ${v.condition.toExponential(3)}\n` +
    v.degrees.map((n, i) => `${n}  ${v.residuals[i].toExponential(12)}`).join("\n");
  plot($("cyc-plot"), v.degrees.map((n, i) => [n, v.residuals[i]]));
};
