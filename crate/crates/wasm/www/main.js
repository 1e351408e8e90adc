import init, {
  sampleOntology, sampleCorpus, similarity, concepts, compareConcepts, analyzeCorpus,
} from "./pkg/onto_enrich_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function el(tag, attrs = {}, ...children) {
  const node = document.createElement(tag);
  Object.assign(node, attrs);
  node.append(...children);
  return node;
}

function show(target, render) {
  target.replaceChildren();
  try {
    target.append(...render());
  } catch (e) {
    target.append(el("p", { className: "error", textContent: String(e) }));
  }
}

function table(head, rows) {
  return el("table", {},
    el("tr", {}, ...head.map((h) => el("th", { textContent: h }))),
    ...rows.map(([cells, cls]) => el("tr", { className: cls || "" },
      ...cells.map((c) => el("td", { textContent: c ?? "none" })))));
}

const path = (p) => (p ? `${p.length}: ${p.nodes.join(" / ")}` : "none");

function renderSimilarity() {
  show($("sim-out"), () => {
    const r = JSON.parse(similarity($("sim-a").value, $("sim-b").value, num("sim-t")));
    return [
      el("p", { textContent: `[${r.lemmas_a.join(", ")}] vs [${r.lemmas_b.join(", ")}]` }),
      table(["phrase word", "label word", "letter Jaccard"],
        r.pairs.map((p) => [[p.left, p.right, p.similarity.toFixed(3)]])),
      el("p", { textContent: r.score === null ? "empty after normalization" : `similarity ${r.score.toFixed(3)}` }),
    ];
  });
}

function renderCompare() {
  show($("cmp-out"), () => {
    const r = JSON.parse(compareConcepts($("onto").value, $("cmp-a").value, $("cmp-b").value, num("cmp-depth")));
    return [table(["filter", "path"], [
      [["hierarchical", path(r.hierarchical)]],
      [["all relations", path(r.full)]],
    ]), el("p", { textContent: r.optimal ? "optimal connection" : "not optimal" })];
  });
}

function fillConcepts() {
  let iris;
  try {
    iris = JSON.parse(concepts($("onto").value));
  } catch (e) {
    $("cmp-out").replaceChildren(el("p", { className: "error", textContent: String(e) }));
    return;
  }
  for (const [id, pick] of [["cmp-a", "c:Perpendicular"], ["cmp-b", "c:TriangleMiddleLine"]]) {
    const keep = $(id).value || pick;
    $(id).replaceChildren(...iris.map((iri) => el("option", { value: iri, textContent: iri })));
    if (iris.includes(keep)) $(id).value = keep;
  }
  renderCompare();
}

function renderAnalysis() {
  show($("an-out"), () => {
    const r = JSON.parse(analyzeCorpus($("onto").value, $("corpus").value,
      num("an-word"), num("an-seq"), num("an-depth")));
    return [
      el("p", { textContent: `${r.records.length} connections, ${r.records.filter((x) => x.optimal).length} optimal, ${r.matches.length} matches` }),
      table(["A", "B", "hierarchical", "all relations", "questions"],
        r.records.map((x) => [[x.concept_a, x.concept_b, path(x.hierarchical), path(x.full), x.question_ids.join(", ")],
          x.optimal ? "optimal" : ""])),
      table(["question", "phrase", "concept", "label", "score"],
        r.matches.map((m) => [[m.question_id, m.phrase.raw, m.concept_iri, m.matched_label, m.score.toFixed(3)]])),
      ...r.warnings.map((w) => el("p", { textContent: `warning: ${w}` })),
    ];
  });
}

await init();
$("onto").value = sampleOntology();
$("corpus").value = sampleCorpus();
for (const id of ["sim-a", "sim-b", "sim-t"]) $(id).addEventListener("input", renderSimilarity);
for (const id of ["cmp-a", "cmp-b", "cmp-depth"]) $(id).addEventListener("input", renderCompare);
$("onto").addEventListener("change", fillConcepts);
$("an-run").addEventListener("click", renderAnalysis);
renderSimilarity();
fillConcepts();
renderAnalysis();
