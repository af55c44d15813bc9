import init, { solveHeatmap, classifyOperator, gammaTrend, version } from "./pkg/avgop_web.js";

const $ = (id) => document.getElementById(id);

function formValues(id) {
  const out = {};
  for (const el of $(id).querySelectorAll("input, select")) {
    out[el.name] = el.type === "number" ? Number(el.value) : el.value;
  }
  return out;
}

function showError(target, err) {
  target.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(err && err.message ? err.message : err);
  target.appendChild(p);
}

// Perceptually ordered ramp from dark blue through teal to yellow.
const STOPS = [[13, 8, 135], [84, 2, 163], [139, 10, 165], [185, 50, 137], [219, 92, 104], [244, 136, 73], [254, 188, 43], [240, 249, 33]];

function colour(t) {
  const x = Math.min(1, Math.max(0, t)) * (STOPS.length - 1);
  const i = Math.min(STOPS.length - 2, Math.floor(x));
  const f = x - i;
  return STOPS[i].map((c, k) => Math.round(c + f * (STOPS[i + 1][k] - c)));
}

function drawHeatmap() {
  const f = formValues("heatmap-form");
  const status = $("heatmap-status");
  let h;
  try {
    const t0 = performance.now();
    h = JSON.parse(solveHeatmap(f.op, f.param, f.radius, f.pattern, f.seed));
    h.ms = performance.now() - t0;
  } catch (e) {
    showError(status, e);
    return;
  }
  const side = 2 * h.radius + 1;
  const canvas = $("heatmap");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(side, side);
  const span = h.max - h.min || 1;
  // values are ordered by x1 then x2; draw x1 to the right and x2 upwards.
  for (let i = 0; i < side; i++) {
    for (let j = 0; j < side; j++) {
      const [r, g, b] = colour((h.values[i * side + j] - h.min) / span);
      const px = ((side - 1 - j) * side + i) * 4;
      img.data.set([r, g, b, 255], px);
    }
  }
  const tmp = new OffscreenCanvas(side, side);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.drawImage(tmp, 0, 0, canvas.width, canvas.height);
  const centre = h.values[h.radius * side + h.radius];
  status.textContent =
    `${h.label} on B_${h.radius}\n` +
    `${h.converged ? "converged" : "NOT converged"} after ${h.sweeps} sweeps\n` +
    `residual ${h.residual.toExponential(2)}\n` +
    `u(0) = ${centre.toFixed(6)}\nrange [${h.min.toFixed(4)}, ${h.max.toFixed(4)}]\n` +
    `${h.ms.toFixed(0)} ms`;
}

function runClassify() {
  const f = formValues("classify-form");
  const target = $("classify-result");
  target.textContent = "running…";
  // Let the status paint before the synchronous battery starts.
  setTimeout(() => {
    let b;
    try {
      b = JSON.parse(classifyOperator(f.op, f.param, f.dim, f.samples, f.seed));
    } catch (e) {
      showError(target, e);
      return;
    }
    const rows = b.reports.map((r) => {
      const name = r.form ? `${r.property}/${r.form}` : r.property;
      const worst = r.worst_margin == null ? "–" : r.worst_margin.toExponential(2);
      const witness = r.witness
        ? `<div class="witness">${JSON.stringify(r.witness.inputs)} → ${JSON.stringify(r.witness.values)}: ${r.witness.detail}</div>`
        : "";
      return `<tr><td>${name}</td><td class="${r.verdict}">${r.verdict}</td><td>${r.samples_run}</td><td>${worst}${witness}</td></tr>`;
    });
    target.innerHTML =
      `<p>${b.operator}: <span class="badge">${b.classification}</span></p>` +
      `<table><thead><tr><th>property</th><th>verdict</th><th>samples</th><th>worst margin / witness</th></tr></thead>` +
      `<tbody>${rows.join("")}</tbody></table>`;
  }, 10);
}

function runGamma() {
  const f = formValues("gamma-form");
  const status = $("gamma-status");
  const svg = $("gamma-chart");
  status.textContent = "running…";
  setTimeout(() => {
    let g;
    try {
      g = JSON.parse(gammaTrend(f.op, f.param, f.dim, f.radii, f.trials, f.seed));
    } catch (e) {
      svg.innerHTML = "";
      showError(status, e);
      return;
    }
    const pts = g.per_radius.map((r) => ({ n: r.radius, gamma: r.gamma, profile: r.profile_ratio }));
    plotTrend(svg, pts);
    status.textContent =
      `${g.operator}\nroot of F(g, -1, 0, …) = 0: ${g.root.toFixed(9)}\n\n` +
      pts.map((p) => `N = ${p.n}: Γ_N = ${p.gamma.toFixed(6)}, profile ratio ${p.profile.toFixed(6)}`).join("\n");
  }, 10);
}

function plotTrend(svg, pts) {
  const W = Number(svg.getAttribute("width"));
  const H = Number(svg.getAttribute("height"));
  const pad = { l: 48, r: 12, t: 12, b: 32 };
  const ns = pts.map((p) => p.n);
  const ys = pts.flatMap((p) => [p.gamma, p.profile]).filter(Number.isFinite).concat([1]);
  const [x0, x1] = [Math.min(...ns), Math.max(...ns)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (n) => pad.l + (x1 === x0 ? 0.5 : (n - x0) / (x1 - x0)) * (W - pad.l - pad.r);
  const sy = (v) => H - pad.b - (y1 === y0 ? 0.5 : (v - y0) / (y1 - y0)) * (H - pad.t - pad.b);
  const line = (key, stroke) =>
    `<polyline fill="none" stroke="${stroke}" stroke-width="2" points="${pts.map((p) => `${sx(p.n)},${sy(p[key])}`).join(" ")}"/>` +
    pts.map((p) => `<circle cx="${sx(p.n)}" cy="${sy(p[key])}" r="3.5" fill="${stroke}"><title>N=${p.n}: ${p[key]}</title></circle>`).join("");
  const ticks = pts.map((p) => `<text x="${sx(p.n)}" y="${H - 12}" text-anchor="middle" font-size="11">${p.n}</text>`).join("");
  svg.innerHTML =
    `<line x1="${pad.l}" y1="${sy(1)}" x2="${W - pad.r}" y2="${sy(1)}" stroke="#aab2bb" stroke-dasharray="4 3"/>` +
    `<text x="${pad.l - 6}" y="${sy(y1) + 4}" text-anchor="end" font-size="11">${y1.toFixed(3)}</text>` +
    `<text x="${pad.l - 6}" y="${sy(y0) + 4}" text-anchor="end" font-size="11">${y0.toFixed(3)}</text>` +
    ticks + line("profile", "#9aa5b1") + line("gamma", "#0b5cad") +
    `<text x="${W - pad.r}" y="${pad.t + 10}" text-anchor="end" font-size="11" fill="#0b5cad">Γ_N (sup over trials)</text>` +
    `<text x="${W - pad.r}" y="${pad.t + 24}" text-anchor="end" font-size="11" fill="#9aa5b1">profile ratio</text>`;
}

await init();
$("version").textContent = version();
$("heatmap-run").addEventListener("click", drawHeatmap);
$("classify-run").addEventListener("click", runClassify);
$("gamma-run").addEventListener("click", runGamma);
drawHeatmap();
