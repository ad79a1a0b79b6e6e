/// Layered genome graph pane: inputs at the bottom, outputs at the top,
/// hidden nodes at their longest-path depth. Edges take their label color,
/// the connection under study is highlighted, and clicking an edge selects
/// it for sweeping. Layout is presentation only; all data comes from the
/// server's genome and label documents.
const SVG_NS = "http://www.w3.org/2000/svg";
const NEUTRAL = "#9a9a9a";
const NODE_TAGS = {
    input_x: "x", input_y: "y", input_d: "d", input_bias: "b",
    output_intensity: "I", output_hue: "H", output_saturation: "S",
};
function layerDepths(genome) {
    const depth = new Map();
    const incoming = new Map();
    for (const node of genome.nodes) {
        depth.set(node.innovation, 0);
        incoming.set(node.innovation, []);
    }
    const enabled = genome.connections.filter((c) => c.enabled);
    for (const c of enabled)
        incoming.get(c.target).push(c.source);
    // Kahn order over enabled edges, then longest-path depth.
    const indeg = new Map();
    const out = new Map();
    for (const node of genome.nodes) {
        indeg.set(node.innovation, 0);
        out.set(node.innovation, []);
    }
    for (const c of enabled) {
        indeg.set(c.target, indeg.get(c.target) + 1);
        out.get(c.source).push(c.target);
    }
    const ready = genome.nodes.map((n) => n.innovation)
        .filter((n) => indeg.get(n) === 0).sort((a, b) => a - b);
    const order = [];
    while (ready.length > 0) {
        const node = ready.shift();
        order.push(node);
        for (const succ of out.get(node)) {
            indeg.set(succ, indeg.get(succ) - 1);
            if (indeg.get(succ) === 0)
                ready.push(succ);
        }
        ready.sort((a, b) => a - b);
    }
    for (const node of order) {
        const preds = incoming.get(node);
        if (preds.length > 0) {
            depth.set(node, 1 + Math.max(...preds.map((p) => depth.get(p))));
        }
    }
    const top = Math.max(0, ...depth.values()) + 1;
    for (const node of genome.nodes) {
        if (node.kind.startsWith("output_"))
            depth.set(node.innovation, top);
    }
    return depth;
}
export class GenomeGraph {
    constructor() {
        this.onPickConnection = () => { };
        this.highlighted = null;
        this.root = document.createElement("div");
        this.root.className = "genome-graph";
    }
    highlight(connection) {
        this.highlighted = connection;
        for (const line of Array.from(this.root.querySelectorAll("line"))) {
            const id = Number(line.dataset.connection);
            line.classList.toggle("highlight", id === connection);
        }
    }
    render(genome, labels) {
        const depths = layerDepths(genome);
        const layers = new Map();
        for (const [node, d] of Array.from(depths.entries()).sort((a, b) => a[0] - b[0])) {
            if (!layers.has(d))
                layers.set(d, []);
            layers.get(d).push(node);
        }
        const maxDepth = Math.max(...layers.keys());
        const widest = Math.max(...Array.from(layers.values(), (v) => v.length));
        const width = 80 + widest * 90;
        const height = 70 + (maxDepth + 1) * 80;
        const pos = new Map();
        for (const [d, members] of layers) {
            const y = height - 40 - d * 80;
            const x0 = (width - (members.length - 1) * 90) / 2;
            members.forEach((node, i) => pos.set(node, [x0 + i * 90, y]));
        }
        const svg = document.createElementNS(SVG_NS, "svg");
        svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
        svg.setAttribute("width", String(width));
        svg.setAttribute("height", String(height));
        for (const c of genome.connections) {
            const [x1, y1] = pos.get(c.source);
            const [x2, y2] = pos.get(c.target);
            const line = document.createElementNS(SVG_NS, "line");
            line.setAttribute("x1", String(x1));
            line.setAttribute("y1", String(y1));
            line.setAttribute("x2", String(x2));
            line.setAttribute("y2", String(y2));
            const label = labels ? labels.labels[String(c.innovation)] : undefined;
            line.setAttribute("stroke", label ? label.color : NEUTRAL);
            line.setAttribute("stroke-width", label ? "3" : "1.5");
            if (!c.enabled)
                line.setAttribute("stroke-dasharray", "6,4");
            line.dataset.connection = String(c.innovation);
            if (c.innovation === this.highlighted)
                line.classList.add("highlight");
            const title = document.createElementNS(SVG_NS, "title");
            title.textContent = `connection ${c.innovation} `
                + `(${c.source} -> ${c.target}, w=${c.weight.toFixed(3)})`
                + (label ? `: ${label.name}` : "");
            line.appendChild(title);
            if (c.enabled) {
                line.addEventListener("click", () => this.onPickConnection(c.innovation));
            }
            svg.appendChild(line);
        }
        for (const node of genome.nodes) {
            const [x, y] = pos.get(node.innovation);
            const circle = document.createElementNS(SVG_NS, "circle");
            circle.setAttribute("cx", String(x));
            circle.setAttribute("cy", String(y));
            circle.setAttribute("r", "16");
            circle.setAttribute("fill", node.kind === "hidden" ? "#e3e3e3" : "#f6f6f6");
            circle.setAttribute("stroke", "#333");
            svg.appendChild(circle);
            const text = document.createElementNS(SVG_NS, "text");
            text.setAttribute("x", String(x));
            text.setAttribute("y", String(y + 4));
            text.setAttribute("text-anchor", "middle");
            text.setAttribute("font-size", "11");
            text.textContent = NODE_TAGS[node.kind] ?? node.activation.slice(0, 1);
            svg.appendChild(text);
        }
        this.root.innerHTML = "";
        this.root.appendChild(svg);
    }
}
