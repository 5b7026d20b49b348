import init, { nsfr_profile, fva_sweep, optimize } from "./pkg/nsfr_fva_web.js";

const ids = ["r0", "volatility", "reg_cap_bp", "im_bp", "one_year_alpha", "n_paths"];
const percent = new Set(["r0", "volatility"]);
const levels = Float64Array.from({ length: 9 }, (_, i) => i * 0.0025);

function params() {
  const p = { seed: 20180101 };
  for (const id of ids) p[id] = Number(document.getElementById(id).value);
  return JSON.stringify(p);
}

function showValues() {
  for (const out of document.querySelectorAll("output")) {
    const v = Number(document.getElementById(out.htmlFor.value).value);
    out.textContent = percent.has(out.htmlFor.value) ? `${(v * 100).toFixed(2)}%` : v;
  }
}

// Minimal line chart: series = [{xs, ys, color, band?}]
function plot(canvas, series, { yMax, yLabel, xLabel, xFmt = (x) => x }) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const g = canvas.getContext("2d");
  g.scale(dpr, dpr);
  g.clearRect(0, 0, w, h);
  const pad = { l: 60, r: 12, t: 10, b: 34 };
  const xs = series.flatMap((s) => s.xs);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const top = yMax ?? (Math.max(...series.flatMap((s) => (s.band ? s.band[1] : s.ys))) * 1.1 || 1);
  const px = (x) => pad.l + ((x - x0) / (x1 - x0 || 1)) * (w - pad.l - pad.r);
  const py = (y) => h - pad.b - (Math.min(y, top) / top) * (h - pad.t - pad.b);

  g.strokeStyle = "#ccc";
  g.fillStyle = "#555";
  g.font = "11px system-ui";
  for (let i = 0; i <= 4; i++) {
    const y = (top * i) / 4;
    g.beginPath(); g.moveTo(pad.l, py(y)); g.lineTo(w - pad.r, py(y)); g.stroke();
    g.fillText(y >= 1000 ? y.toExponential(1) : String(Number(y.toPrecision(3))), 4, py(y) + 4);
  }
  for (let i = 0; i <= 5; i++) {
    const x = x0 + ((x1 - x0) * i) / 5;
    g.fillText(xFmt(x), px(x) - 12, h - pad.b + 14);
  }
  g.fillText(xLabel, w / 2 - 20, h - 4);
  g.fillText(yLabel, pad.l + 4, pad.t + 10);

  for (const s of series) {
    if (s.band) {
      g.fillStyle = s.color + "33";
      g.beginPath();
      s.xs.forEach((x, i) => g.lineTo(px(x), py(s.band[1][i])));
      [...s.xs].reverse().forEach((x, i) => g.lineTo(px(x), py(s.band[0][s.xs.length - 1 - i])));
      g.fill();
    }
    g.strokeStyle = s.color;
    g.lineWidth = 2;
    g.beginPath();
    s.xs.forEach((x, i) => (i ? g.lineTo(px(x), py(s.ys[i])) : g.moveTo(px(x), py(s.ys[i]))));
    g.stroke();
  }
}

const millions = (x) => (x / 1e6).toFixed(4);

function table(el, header, rows) {
  el.innerHTML = "";
  const tr = el.insertRow();
  for (const h of header) tr.appendChild(Object.assign(document.createElement("th"), { textContent: h }));
  for (const row of rows) {
    const r = el.insertRow();
    for (const c of row) r.insertCell().textContent = c;
  }
}

function update() {
  showValues();
  const status = document.getElementById("status");
  const p = params();
  try {
    const prof = JSON.parse(nsfr_profile(p));
    plot(document.getElementById("profile"), [
      { xs: prof.times, ys: prof.nsfr_standard, color: "#1f77b4" },
      { xs: prof.times, ys: prof.nsfr_pinned, color: "#d62728" },
    ], { yMax: 3, yLabel: "E[NSFR] (capped at 3)", xLabel: "years", xFmt: (x) => x.toFixed(1) });

    const sweep = JSON.parse(fva_sweep(p, levels));
    const r = sweep.map((s) => s.r0);
    plot(document.getElementById("sweep"), [
      {
        xs: r, ys: sweep.map((s) => s.fva_total / 1e6), color: "#2ca02c",
        band: [sweep.map((s) => (s.fva_total - 2 * s.fva_se) / 1e6), sweep.map((s) => (s.fva_total + 2 * s.fva_se) / 1e6)],
      },
      { xs: r, ys: sweep.map((s) => s.fca / 1e6), color: "#9467bd" },
    ], { yLabel: "millions", xLabel: "OIS r0", xFmt: (x) => `${(x * 100).toFixed(2)}%` });

    const opt = JSON.parse(optimize(p));
    table(document.getElementById("policy"), ["issue at (y)", ...opt.node_times.map((t) => t.toFixed(1))],
      [["tenor", ...opt.tenors]]);
    table(document.getElementById("costs"), ["policy", "cost (M)"], [
      ["optimal", `${millions(opt.optimal)} ± ${millions(2 * opt.optimal_se)}`],
      ...opt.fixed.map(([t, c]) => [`always ${t}`, millions(c)]),
      ["FCA (1y spread)", millions(opt.fca)],
    ]);
    status.textContent = "";
  } catch (e) {
    status.textContent = String(e);
  }
}

await init();
let pending;
for (const id of ids) {
  document.getElementById(id).addEventListener("input", () => {
    showValues();
    clearTimeout(pending);
    pending = setTimeout(update, 150);
  });
}
window.addEventListener("resize", () => { clearTimeout(pending); pending = setTimeout(update, 150); });
update();
