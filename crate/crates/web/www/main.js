import init, { models, certify_model, conjugate_slice, lambda } from "./pkg/svpc_web.js";

const $ = (id) => document.getElementById(id);
let catalog = [];

function paint(canvas, n, values, colour) {
  canvas.width = n;
  canvas.height = n;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(n, n);
  const finite = values.filter((v) => v !== null);
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = values[i * n + j];
      // row i of the grid is the first coordinate; draw it bottom-up
      const p = 4 * ((n - 1 - j) * n + i);
      const [r, g, b] = v === null ? [160, 160, 160] : colour(hi > lo ? (v - lo) / (hi - lo) : 0);
      img.data.set([r, g, b, 255], p);
    }
  }
  ctx.putImageData(img, 0, 0);
}

const reds = (t) => [255, Math.round(255 * (1 - t)), Math.round(255 * (1 - t))];
const blues = (t) => [Math.round(255 * (1 - t)), Math.round(255 * (1 - 0.6 * t)), 255];

function showInfo() {
  const m = catalog.find((m) => m.name === $("model").value);
  const defaults = Object.fromEntries(m.params.map((p) => [p.name, p.default]));
  $("params").value = JSON.stringify(defaults);
  $("model-info").textContent = `${m.description} (known svpc: ${m.known_svpc})`;
}

function certify() {
  const n = Number($("count").value);
  try {
    const out = JSON.parse(certify_model($("model").value, $("params").value, Number($("half").value), n));
    const c = out.certificate;
    $("verdict").textContent = `${c.verdict}  (max gap ${Number(c.max_gap).toPrecision(4)}, tol ${Number(c.certify_tol).toPrecision(3)})`;
    $("certificate").textContent = JSON.stringify(c, null, 2);
    const gap = out.phi.map((v, k) => (v === null ? null : Math.max(0, v - out.envelope[k])));
    paint($("gap"), n, gap, reds);
    slice();
  } catch (e) {
    $("verdict").textContent = `error: ${e.message ?? e}`;
  }
}

function slice() {
  const n = Number($("beta-count").value);
  const half = Number($("beta-half").value);
  const b3 = Number($("beta3").value);
  $("beta3").min = -half;
  $("beta3").max = half;
  $("beta3-value").textContent = b3;
  try {
    const out = JSON.parse(
      conjugate_slice($("model").value, $("params").value, Number($("half").value), Number($("count").value), half, n, b3),
    );
    paint($("conj"), n, out.values, blues);
  } catch (e) {
    $("verdict").textContent = `error: ${e.message ?? e}`;
  }
}

function evaluateLambda() {
  const parse = (s) => s.split(",").map(Number);
  try {
    const v = lambda(new Float64Array(parse($("lam-beta").value)), new Float64Array(parse($("lam-nu").value)));
    $("lambda-out").textContent = `Λ_β(ν) = ${v}`;
  } catch (e) {
    $("lambda-out").textContent = `error: ${e.message ?? e}`;
  }
}

await init();
catalog = JSON.parse(models());
for (const m of catalog) {
  const opt = document.createElement("option");
  opt.value = opt.textContent = m.name;
  $("model").append(opt);
}
$("model").value = "double_well";
$("model").addEventListener("change", showInfo);
$("run-certify").addEventListener("click", certify);
$("beta3").addEventListener("input", slice);
$("beta-half").addEventListener("change", slice);
$("beta-count").addEventListener("change", slice);
$("run-lambda").addEventListener("click", evaluateLambda);
showInfo();
certify();
evaluateLambda();
