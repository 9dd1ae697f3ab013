import init, { geometry, prepare, anyons, braid } from "./pkg/topoff_wasm.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";
const CELL = 50;
const PAD = 35;

function el(tag, attrs, parent) {
  const e = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  parent.appendChild(e);
  return e;
}

// Plaquette marker position; wrapped supports are unfolded first.
function centre(g, support) {
  const axis = (i, size) => {
    let v = support.map((q) => g.qubit_coords[q][i]);
    if (Math.max(...v) - Math.min(...v) > 2) v = v.map((x) => (x < size / 2 ? x + size : x));
    return v.reduce((a, b) => a + b, 0) / v.length;
  };
  return [axis(0, g.rows), axis(1, g.cols)];
}

function draw(svg, g, colour, onQubit) {
  svg.replaceChildren();
  const xy = (r, c) => [PAD + c * CELL, PAD + r * CELL];
  for (const p of g.plaquettes) {
    const [r, c] = centre(g, p.support);
    const [x, y] = xy(r, c);
    el("rect", { x: x - 14, y: y - 14, width: 28, height: 28, rx: 4, fill: colour(p) }, svg);
    el("text", { x: x - 10, y: y + 4 }, svg).textContent = (p.kind === "defect" ? "D" : p.kind.toUpperCase()) + p.label;
  }
  g.qubit_coords.forEach(([r, c], q) => {
    const [x, y] = xy(r, c);
    const dot = el("circle", { cx: x, cy: y, r: 9, fill: "#fff", stroke: "#333", class: "qubit" }, svg);
    el("text", { x: x - 6, y: y + 4 }, svg).textContent = q;
    if (onQubit) dot.addEventListener("click", () => onQubit(q));
  });
}

function noiseSpec() {
  const p2 = +$("p2").value, mem = +$("mem").value, spam = +$("spam").value;
  return JSON.stringify({ p2, z_bias: 0.6, p1: 4e-5, spam: { p01: spam, p10: spam }, mem });
}

function shade(v) {
  // +1 → pale green, −1 → red
  const t = Math.max(0, Math.min(1, (1 - v) / 2));
  return `rgb(${Math.round(200 + 55 * t)}, ${Math.round(235 - 150 * t)}, ${Math.round(200 - 120 * t)})`;
}

function showError(target, e) {
  target.innerHTML = `<span class="error">${e.message ?? e}</span>`;
}

function runPrepare() {
  const lattice = $("prep-lattice").value;
  try {
    const g = JSON.parse(geometry(lattice));
    const r = JSON.parse(prepare(lattice, noiseSpec(), +$("prep-shots").value, BigInt($("prep-seed").value)));
    const means = Object.fromEntries(r.stabilizers);
    draw($("prep-svg"), g, (p) => shade(means[p.label] ?? 1));
    $("prep-out").innerHTML = [
      `energy density  ${r.energy_density.toFixed(4)} ± ${r.std_err.toFixed(4)}`,
      `⟨A_p⟩ (X)       ${r.mean_x_plaquettes.toFixed(4)}`,
      `⟨B_p⟩ (Z)       ${r.mean_z_plaquettes.toFixed(4)}`,
      `discarded       ${(100 * r.discard_fraction).toFixed(1)} %`,
      `kept shots      ${r.kept}`,
    ].join("<br>");
  } catch (e) {
    showError($("prep-out"), e);
  }
}

let moves = [];

function runAnyons() {
  const lattice = $("any-lattice").value;
  $("any-moves").textContent = moves.join(" ") || "(none)";
  try {
    const g = JSON.parse(geometry(lattice));
    const r = JSON.parse(anyons(lattice, moves.join(" ")));
    const excited = new Map(r.excitations.map((e) => [e.label, e.anyon]));
    draw($("any-svg"), g, (p) => (excited.has(p.label) ? "#e77" : "#dfe8df"), (q) => {
      const pauli = document.querySelector("input[name=pauli]:checked").value;
      moves.push(pauli + q);
      runAnyons();
    });
    $("any-out").innerHTML = r.excitations.length
      ? r.excitations.map((e) => `${e.anyon} on plaquette ${e.label}`).join("<br>")
      : "vacuum";
  } catch (e) {
    showError($("any-out"), e);
  }
}

function bar(v) {
  const w = Math.round(Math.abs(v) * 120);
  return `<span class="bar${v < 0 ? " neg" : ""}" style="width:${w}px"></span>`;
}

function runBraid() {
  const noise = $("braid-noise").checked ? "h1-1" : "none";
  $("braid-out").textContent = "running…";
  // let the message paint before the simulation blocks
  setTimeout(() => {
    try {
      const r = JSON.parse(braid(noise, +$("braid-shots").value, BigInt($("braid-seed").value)));
      $("braid-out").innerHTML = [
        `with fermion     ${r.with_fermion.toFixed(3)} ± ${r.with_fermion_err.toFixed(3)} ${bar(r.with_fermion)}`,
        `without fermion  ${r.without_fermion.toFixed(3)} ± ${r.without_fermion_err.toFixed(3)} ${bar(r.without_fermion)}`,
        `discarded        ${(100 * r.discard_fraction).toFixed(1)} %`,
      ].join("<br>");
    } catch (e) {
      showError($("braid-out"), e);
    }
  }, 10);
}

await init();
for (const id of ["p2", "mem", "spam"]) {
  const out = document.querySelector(`output[for=${id}]`);
  const sync = () => (out.textContent = $(id).value);
  $(id).addEventListener("input", sync);
  sync();
}
$("prep-run").addEventListener("click", runPrepare);
$("prep-lattice").addEventListener("change", runPrepare);
$("any-lattice").addEventListener("change", () => { moves = []; runAnyons(); });
$("any-reset").addEventListener("click", () => { moves = []; runAnyons(); });
$("any-demo").addEventListener("click", () => {
  $("any-lattice").value = "defect";
  moves = ["X12", "X13", "Z6", "Z5"];
  runAnyons();
});
$("braid-run").addEventListener("click", runBraid);
runPrepare();
runAnyons();
