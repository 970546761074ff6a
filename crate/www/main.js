import init, { mode_map, mode_token, cell, engineCurve, susceptibility } from "./pkg/spin_stirling_web.js";

const MODE_COLORS = ["#4c9be8", "#f28e2b", "#59a14f", "#e15759", "#bbbbbb", "#000000"];
const MODE_NAMES = ["heat engine", "refrigerator", "accelerator", "heater", "Carnot point", "forbidden"];

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function guard(errorId, fn) {
  try {
    fn();
    $(errorId).textContent = "";
  } catch (e) {
    $(errorId).textContent = e.message ?? String(e);
  }
}

// ---- mode map -------------------------------------------------------------

let lastMap = null;

function mapParams() {
  const n = Math.max(2, Math.min(600, Math.round(num("map-n"))));
  return {
    negative: $("map-branch").value === "neg",
    jb: num("map-jb"),
    tc: num("map-tc"),
    rmin: num("map-rmin"),
    rmax: num("map-rmax"),
    tmax: num("map-tmax"),
    nr: n,
    nt: n,
  };
}

function drawMap() {
  guard("map-error", () => {
    const p = mapParams();
    const codes = mode_map(p.negative, p.jb, p.tc, p.rmin, p.rmax, p.nr, p.tmax, p.nt);
    const canvas = $("map");
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(p.nr, p.nt);
    for (let row = 0; row < p.nt; row++) {
      // First row of the buffer is the smallest temperature ratio: draw it at the bottom.
      const y = p.nt - 1 - row;
      for (let col = 0; col < p.nr; col++) {
        const rgb = hex(MODE_COLORS[codes[row * p.nr + col]] ?? "#ff00ff");
        const k = 4 * (y * p.nr + col);
        img.data.set([rgb[0], rgb[1], rgb[2], 255], k);
      }
    }
    const off = new OffscreenCanvas(p.nr, p.nt);
    off.getContext("2d").putImageData(img, 0, 0);
    const frame = { left: 50, top: 10, right: canvas.width - 10, bottom: canvas.height - 40 };
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, frame.left, frame.top, frame.right - frame.left, frame.bottom - frame.top);
    axes(ctx, frame, [p.rmin, p.rmax], [1, p.tmax], "J_A / J_B", "T_h / T_c");
    lastMap = { ...p, frame };

    const present = new Set(codes);
    $("map-legend").innerHTML = MODE_NAMES.map((name, k) =>
      present.has(k) ? `<span><i class="swatch" style="background:${MODE_COLORS[k]}"></i>${name}</span>` : ""
    ).join("");
  });
}

function inspect(event) {
  if (!lastMap) return;
  const { frame, rmin, rmax, tmax, nr, nt } = lastMap;
  const rect = $("map").getBoundingClientRect();
  const scale = $("map").width / rect.width;
  const x = (event.clientX - rect.left) * scale;
  const y = (event.clientY - rect.top) * scale;
  if (x < frame.left || x > frame.right || y < frame.top || y > frame.bottom) return;
  // Snap to the grid node under the cursor so the table matches the pixel.
  const col = Math.min(nr - 1, Math.floor(((x - frame.left) / (frame.right - frame.left)) * nr));
  const row = Math.min(nt - 1, Math.floor(((frame.bottom - y) / (frame.bottom - frame.top)) * nt));
  // Same operation order as the Rust axes, so the lookup hits the node exactly.
  const ratio = nr === 1 ? rmin : rmin + ((rmax - rmin) / (nr - 1)) * col;
  const tratio = 1 + ((tmax - 1) / nt) * (row + 1);
  guard("map-error", () => {
    const v = cell(lastMap.negative, lastMap.jb, lastMap.tc, ratio, tratio);
    const jb = (lastMap.negative ? -1 : 1) * lastMap.jb;
    const rows = [
      ["J_A / k_B (K)", fmt(ratio * jb)],
      ["J_B / k_B (K)", fmt(jb)],
      ["T_h (K)", fmt(tratio * lastMap.tc)],
      ["T_c (K)", fmt(lastMap.tc)],
      ["Q_AB (eV)", sci(v[0])],
      ["Q_BC (eV)", sci(v[1])],
      ["Q_CD (eV)", sci(v[2])],
      ["Q_DA (eV)", sci(v[3])],
      ["W (eV)", sci(v[4])],
      ["mode", mode_token(v[7])],
      ["η", Number.isNaN(v[8]) ? "–" : fmt(v[8])],
      ["η_C", fmt(v[9])],
    ];
    $("cell-table").innerHTML = rows.map(([k, val]) => `<tr><td>${k}</td><td>${val}</td></tr>`).join("");
  });
}

// ---- engine curve ---------------------------------------------------------

function drawEngine() {
  guard("engine-error", () => {
    const steps = 300;
    const v = engineCurve(num("eng-ja"), num("eng-jb"), num("eng-tc"), num("eng-thmin"), num("eng-thmax"), steps);
    const th = [], w = [], qin = [], eta = [], etac = [];
    for (let k = 0; k < v.length; k += 5) {
      th.push(v[k]); w.push(v[k + 1]); qin.push(v[k + 2]); eta.push(v[k + 3]); etac.push(v[k + 4]);
    }
    lineChart($("eta"), th, [{ y: eta, color: "#1f77b4" }, { y: etac, color: "#d62728" }], "T_h (K)", "efficiency");
    lineChart($("work"), th, [{ y: w, color: "#2ca02c" }, { y: qin, color: "#ff7f0e" }], "T_h (K)", "energy (eV)");
  });
}

// ---- susceptibility -------------------------------------------------------

function drawChi() {
  guard("chi-error", () => {
    const v = susceptibility(num("chi-j"), num("chi-g"), num("chi-tmin"), num("chi-tmax"), 400);
    const t = [], chi = [], chit = [];
    for (let k = 0; k < v.length; k += 3) {
      t.push(v[k]); chi.push(v[k + 1]); chit.push(v[k + 2]);
    }
    lineChart($("chi"), t, [{ y: chi, color: "#9467bd" }], "T (K)", "χ");
    lineChart($("chit"), t, [{ y: chit, color: "#8c564b" }], "T (K)", "χT");
  });
}

// ---- drawing helpers ------------------------------------------------------

function hex(c) {
  return [1, 3, 5].map((i) => parseInt(c.slice(i, i + 2), 16));
}

function fmt(x) {
  return Number(x).toPrecision(5);
}

function sci(x) {
  return Number(x).toExponential(4);
}

function ticks(lo, hi, n = 5) {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= raw);
  const out = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push(t);
  return out;
}

function label(t) {
  const a = Math.abs(t);
  return a !== 0 && (a < 1e-3 || a >= 1e4) ? t.toExponential(1) : String(Number(t.toPrecision(6)));
}

function axes(ctx, f, [x0, x1], [y0, y1], xlabel, ylabel) {
  ctx.strokeStyle = "#333";
  ctx.fillStyle = "#333";
  ctx.font = "11px system-ui, sans-serif";
  ctx.strokeRect(f.left, f.top, f.right - f.left, f.bottom - f.top);
  const sx = (x) => f.left + ((x - x0) / (x1 - x0 || 1)) * (f.right - f.left);
  const sy = (y) => f.bottom - ((y - y0) / (y1 - y0 || 1)) * (f.bottom - f.top);
  ctx.textAlign = "center";
  ctx.textBaseline = "top";
  for (const t of ticks(x0, x1)) {
    ctx.beginPath(); ctx.moveTo(sx(t), f.bottom); ctx.lineTo(sx(t), f.bottom + 4); ctx.stroke();
    ctx.fillText(label(t), sx(t), f.bottom + 6);
  }
  ctx.fillText(xlabel, (f.left + f.right) / 2, f.bottom + 22);
  ctx.textAlign = "right";
  ctx.textBaseline = "middle";
  for (const t of ticks(y0, y1)) {
    ctx.beginPath(); ctx.moveTo(f.left - 4, sy(t)); ctx.lineTo(f.left, sy(t)); ctx.stroke();
    ctx.fillText(label(t), f.left - 6, sy(t));
  }
  ctx.save();
  ctx.translate(12, (f.top + f.bottom) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.textAlign = "center";
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
  return { sx, sy };
}

function lineChart(canvas, x, series, xlabel, ylabel) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const f = { left: 64, top: 10, right: canvas.width - 10, bottom: canvas.height - 40 };
  const finite = series.flatMap((s) => s.y.filter(Number.isFinite));
  let lo = Math.min(0, ...finite);
  let hi = Math.max(...finite);
  if (!Number.isFinite(hi) || hi <= lo) hi = lo + 1;
  const { sx, sy } = axes(ctx, f, [x[0], x[x.length - 1]], [lo, hi], xlabel, ylabel);
  ctx.lineWidth = 1.6;
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    let pen = false;
    s.y.forEach((y, k) => {
      if (!Number.isFinite(y)) { pen = false; return; }
      if (pen) ctx.lineTo(sx(x[k]), sy(y)); else ctx.moveTo(sx(x[k]), sy(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.lineWidth = 1;
}

// ---- wiring ---------------------------------------------------------------

await init();
for (const [form, draw] of [["map-form", drawMap], ["engine-form", drawEngine], ["chi-form", drawChi]]) {
  $(form).addEventListener("change", draw);
  $(form).addEventListener("submit", (e) => { e.preventDefault(); draw(); });
}
$("map").addEventListener("click", inspect);
drawMap();
drawEngine();
drawChi();
