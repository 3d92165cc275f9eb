import init, { modeComparison, poleHeatmap, convergence } from "./pkg/sholo_web.js";

const SVG = "http://www.w3.org/2000/svg";

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

// Runs `work` on submit, showing any thrown message in the section's error slot.
function bind(id, work) {
  const section = document.getElementById(id);
  const form = section.querySelector("form");
  const err = section.querySelector(".err");
  const run = () => {
    err.textContent = "";
    try {
      work(section, fields(form));
    } catch (e) {
      err.textContent = e.message ?? String(e);
    }
  };
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    run();
  });
  run();
}

function el(name, attrs, parent) {
  const node = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (parent) parent.appendChild(node);
  return node;
}

// Lattice values as dots, the continuum restriction as a line.
function modePlot(doc, part) {
  const [w, h, pad] = [720, 360, 40];
  const pts = doc.points;
  const ys = pts.map((p) => p[part]).concat(doc.curve.map((p) => p[part]));
  const [lo, hi] = [Math.min(...ys, -1e-9), Math.max(...ys, 1e-9)];
  const sx = (x) => pad + (x + 0.5) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - lo) / (hi - lo)) * (h - 2 * pad);
  const svg = el("svg", { width: w, height: h, viewBox: `0 0 ${w} ${h}` });
  el("line", { x1: pad, x2: w - pad, y1: sy(0), y2: sy(0), stroke: "#bbb" }, svg);
  const line = doc.curve.map((p) => `${sx(p.x).toFixed(2)},${sy(p[part]).toFixed(2)}`).join(" ");
  el("polyline", { points: line, fill: "none", stroke: "#d95f02", "stroke-width": 2 }, svg);
  for (const p of pts) {
    el("circle", { cx: sx(p.x), cy: sy(p[part]), r: 3, fill: "#1b9e77" }, svg);
  }
  const label = el("text", { x: pad, y: 20, "font-size": 13 }, svg);
  label.textContent = "dots: √ℓ f_k on the lattice; line: continuum mode";
  return svg;
}

function table(rows) {
  const t = document.createElement("table");
  const head = t.insertRow();
  for (const c of ["ℓ", "quantity", "error"]) {
    const th = document.createElement("th");
    th.textContent = c;
    head.appendChild(th);
  }
  for (const r of rows) {
    const tr = t.insertRow();
    tr.insertCell().textContent = r.len;
    tr.insertCell().textContent = r.quantity;
    tr.insertCell().textContent = Number(r.error).toExponential(3);
  }
  return t;
}

await init();

bind("mode", (section, f) => {
  const doc = JSON.parse(modeComparison(Number(f.len), Number(f.k)));
  section.querySelector(".summary").textContent =
    `ω = ${doc.omega.toPrecision(8)}, Λ = ${doc.lambda.toPrecision(8)}, ` +
    `max |√ℓ f_k − e_k| = ${doc.sup_error.toExponential(3)}`;
  section.querySelector(".out").replaceChildren(modePlot(doc, f.part));
});

bind("pole", (section, f) => {
  section.querySelector(".out").innerHTML = poleHeatmap(Number(f.len), f.which, Number(f.k));
});

bind("converge", (section, f) => {
  const doc = JSON.parse(convergence(f.table, f.which, Number(f.k), Number(f.lmax)));
  section.querySelector(".out").innerHTML = doc.svg;
  section.querySelector(".rows").replaceChildren(table(doc.table.rows));
});
