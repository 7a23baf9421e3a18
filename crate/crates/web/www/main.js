import init, { couplings, synthesize } from "./pkg/spectral_gates_web.js";

const $ = (id) => document.getElementById(id);
let design = null;

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, 10);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - 10, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
}

function drawSidebands() {
  const depth = Number($("depth").value);
  $("depth-value").textContent = depth.toFixed(2);
  const half = 10;
  const power = couplings(depth, 64, half);
  const c = $("sidebands");
  const ctx = c.getContext("2d");
  const pad = 30;
  axes(ctx, c.width, c.height, pad);
  const slot = (c.width - pad - 20) / power.length;
  power.forEach((p, i) => {
    const x = pad + 5 + i * slot;
    const bar = p * (c.height - pad - 20);
    ctx.fillStyle = "#3a6ea5";
    ctx.fillRect(x, c.height - pad - bar, slot * 0.7, bar);
    ctx.fillStyle = "#444";
    ctx.fillText(String(i - half), x, c.height - pad + 14);
  });
  ctx.fillText("1", 8, 20);
}

function drawLines(canvas, series, yMin, yMax, xs) {
  const ctx = canvas.getContext("2d");
  const pad = 40;
  axes(ctx, canvas.width, canvas.height, pad);
  const xMin = xs[0];
  const xMax = xs[xs.length - 1];
  const px = (x) => pad + ((x - xMin) / Math.max(xMax - xMin, 1)) * (canvas.width - pad - 20);
  const py = (y) => canvas.height - pad - ((y - yMin) / (yMax - yMin)) * (canvas.height - pad - 20);
  series.forEach(({ ys, colour, label }, k) => {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    ys.forEach((y, i) => (i ? ctx.lineTo(px(xs[i]), py(y)) : ctx.moveTo(px(xs[i]), py(y))));
    ctx.stroke();
    ctx.fillStyle = colour;
    ctx.fillText(label, canvas.width - 160, 20 + 14 * k);
  });
  ctx.fillStyle = "#444";
  ctx.fillText(String(xMin), pad, canvas.height - pad + 14);
  ctx.fillText(String(xMax), canvas.width - 30, canvas.height - pad + 14);
  ctx.fillText(yMax.toFixed(2), 2, 20);
  ctx.fillText(yMin.toFixed(2), 2, canvas.height - pad);
}

const colours = ["#3a6ea5", "#c0504d", "#4f9a3a", "#8064a2"];

function runSynthesis() {
  $("result").classList.remove("err");
  $("result").textContent = "optimizing...";
  // Let the page repaint before the blocking call.
  setTimeout(() => {
    try {
      const t0 = performance.now();
      if (design) design.free();
      design = synthesize(
        $("gate").value,
        Number($("modes").value),
        Number($("stages").value),
        Number($("restarts").value),
        Number($("seed").value),
      );
      const secs = ((performance.now() - t0) / 1000).toFixed(1);
      $("result").textContent =
        `F = ${design.fidelity().toFixed(6)}\nP = ${design.probability().toFixed(6)}\n` +
        `${design.feasible() ? "feasible" : "below the fidelity floor"} (${secs} s)`;
      const m = design.modes();
      const xs = [...Array(m).keys()];
      const series = [];
      for (let s = 0; s < design.stages(); s++) {
        series.push({ ys: Array.from(design.drive(s)), colour: colours[s % 4], label: `drive ${s + 1} (rad)` });
      }
      const all = series.flatMap((s) => s.ys);
      drawLines($("drives"), series, Math.min(...all), Math.max(...all) + 1e-9, xs);
      $("sweep").disabled = false;
    } catch (e) {
      $("result").classList.add("err");
      $("result").textContent = String(e);
    }
  }, 20);
}

function runSweep() {
  try {
    const [span, m] = design.band_limits();
    const step = Number($("step").value);
    const flat = design.sweep(span, m, step);
    const bands = [], fs = [], ps = [];
    for (let i = 0; i < flat.length; i += 3) {
      bands.push(flat[i]);
      fs.push(flat[i + 1]);
      ps.push(flat[i + 2] / design.probability());
    }
    const reached = bands.find((b, i) => ps[i] >= 0.9);
    $("sweep-result").textContent = `90% of P reached at ${reached ?? "none of the swept"} modes`;
    drawLines($("sweep-plot"), [
      { ys: fs, colour: colours[0], label: "fidelity" },
      { ys: ps, colour: colours[1], label: "P / unfiltered P" },
    ], 0, 1.05, bands);
  } catch (e) {
    $("sweep-result").textContent = String(e);
  }
}

await init();
$("depth").addEventListener("input", drawSidebands);
$("run").addEventListener("click", runSynthesis);
$("sweep").addEventListener("click", runSweep);
drawSidebands();
