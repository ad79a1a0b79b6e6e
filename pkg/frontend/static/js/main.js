/// Application shell: session controls, population grid, publish flow,
/// branch links, and the sweep explorer with its genome graph pane.
///
/// The server owns all state; after every acknowledged action the view is
/// refetched, and at most one mutating request per session is in flight.
import { ApiClient, ApiError } from "./api.js";
import { PopulationGrid } from "./grid.js";
import { GenomeGraph } from "./graph.js";
import { SweepExplorer } from "./sweep.js";
export class App {
    constructor(root, base = "") {
        this.root = root;
        this.sessionId = null;
        this.busy = false;
        this.currentImage = null;
        this.currentGenome = null;
        this.api = new ApiClient(base);
        this.root.innerHTML = `
            <header class="toolbar">
              <form class="new-session">
                <select class="palette">
                  <option value="gray">gray</option>
                  <option value="color">color</option>
                </select>
                <input class="seed" type="number" placeholder="seed (optional)">
                <button type="submit">start from scratch</button>
              </form>
              <form class="branch-session">
                <input class="branch-id" type="text" placeholder="image id">
                <button type="submit">branch</button>
              </form>
              <div class="notices" aria-live="polite"></div>
            </header>
            <section class="session" hidden>
              <div class="session-bar">
                <span class="generation"></span>
                <button type="button" class="next" disabled>next generation</button>
              </div>
              <form class="publish-bar">
                <input class="title" type="text" placeholder="title (required to publish)">
                <input class="author" type="text" placeholder="author">
              </form>
              <div class="grid-host"></div>
            </section>
            <section class="published" hidden>
              <h3>published <span class="image-id"></span></h3>
              <img class="published-image" alt="published image">
              <div class="published-actions">
                <button type="button" class="branch-published">branch from this image</button>
                <label>study connection
                  <select class="connection-pick"></select>
                </label>
                <button type="button" class="open-sweep">open sweep</button>
              </div>
              <div class="sweep-host" hidden></div>
              <div class="graph-host"></div>
            </section>`;
        this.grid = new PopulationGrid();
        this.query(".grid-host").appendChild(this.grid.root);
        this.sweep = new SweepExplorer(this.api);
        this.query(".sweep-host").appendChild(this.sweep.root);
        this.graph = new GenomeGraph();
        this.query(".graph-host").appendChild(this.graph.root);
        this.query(".new-session").addEventListener("submit", (e) => {
            e.preventDefault();
            const palette = this.query(".palette").value;
            const seedRaw = this.query(".seed").value;
            void this.startScratch(palette, seedRaw === "" ? undefined : Number(seedRaw));
        });
        this.query(".branch-session").addEventListener("submit", (e) => {
            e.preventDefault();
            const id = this.query(".branch-id").value.trim();
            if (id !== "")
                void this.branchFrom(id);
        });
        this.query(".next").addEventListener("click", () => void this.nextGeneration());
        this.query(".branch-published").addEventListener("click", () => {
            if (this.currentImage)
                void this.branchFrom(this.currentImage);
        });
        this.query(".open-sweep").addEventListener("click", () => {
            const pick = this.query(".connection-pick").value;
            if (pick !== "")
                void this.openSweep(Number(pick));
        });
        this.grid.onToggle = (_slot, selected) => void this.pushSelection(selected);
        this.grid.onPublish = (slot) => void this.publish(slot);
        this.sweep.onLabeled = () => void this.refreshGraph();
        this.sweep.onFineToggle = (fine) => {
            const conn = this.sweep.connection;
            if (conn !== null)
                void this.openSweep(conn, fine ? 0.01 : 0.1);
        };
        this.graph.onPickConnection = (innovation) => void this.openSweep(innovation);
    }
    query(selector) {
        return this.root.querySelector(selector);
    }
    notice(text) {
        const box = this.query(".notices");
        box.textContent = text;
    }
    async guarded(work) {
        if (this.busy) {
            this.notice("still working on the previous action");
            return undefined;
        }
        this.busy = true;
        try {
            return await work();
        }
        catch (err) {
            this.notice(err instanceof ApiError
                ? `server: ${err.message}` : `error: ${err.message}`);
            return undefined;
        }
        finally {
            this.busy = false;
        }
    }
    updateNextButton() {
        this.query(".next").disabled =
            this.grid.selectedSlots().length === 0;
    }
    async refreshPopulation() {
        if (!this.sessionId)
            return;
        const view = await this.api.population(this.sessionId);
        if (this.grid.render(view)) {
            this.query(".generation").textContent = `generation ${view.generation}`;
        }
        this.updateNextButton();
    }
    async startScratch(palette, seed) {
        await this.guarded(async () => {
            this.sessionId = await this.api.createSession({ from: "scratch", palette, seed });
            this.query(".session").removeAttribute("hidden");
            this.notice(`session ${this.sessionId} started`);
            await this.refreshPopulation();
        });
    }
    async branchFrom(imageId) {
        await this.guarded(async () => {
            this.sessionId = await this.api.createSession({ from: imageId });
            this.query(".session").removeAttribute("hidden");
            this.notice(`branched session from image ${imageId}`);
            await this.refreshPopulation();
        });
    }
    async pushSelection(selected) {
        if (!this.sessionId)
            return;
        await this.guarded(() => this.api.select(this.sessionId, selected));
        this.updateNextButton();
    }
    async nextGeneration() {
        if (!this.sessionId)
            return;
        if (this.grid.selectedSlots().length === 0) {
            this.notice("select at least one image first");
            return;
        }
        await this.guarded(async () => {
            const generation = await this.api.nextGeneration(this.sessionId);
            this.notice(`generation ${generation}`);
            await this.refreshPopulation();
        });
    }
    async publish(slot) {
        if (!this.sessionId)
            return undefined;
        const title = this.query(".title").value.trim();
        const author = this.query(".author").value.trim();
        if (title === "") {
            this.notice("a title is required to publish");
            return undefined;
        }
        return this.guarded(async () => {
            const record = await this.api.publish(this.sessionId, slot, title, author);
            this.notice(`published image ${record.genome_id}`);
            await this.showPublished(record.genome_id);
            return record;
        });
    }
    async showPublished(imageId) {
        this.currentImage = imageId;
        this.currentGenome = await this.api.genome(imageId);
        this.query(".published").removeAttribute("hidden");
        this.query(".image-id").textContent = imageId;
        this.query(".published-image").src =
            `/images/${imageId}.png?size=192`;
        const pick = this.query(".connection-pick");
        pick.innerHTML = "";
        for (const conn of this.currentGenome.connections) {
            if (!conn.enabled)
                continue;
            const option = document.createElement("option");
            option.value = String(conn.innovation);
            option.textContent =
                `${conn.innovation}: ${conn.source} -> ${conn.target}`;
            pick.appendChild(option);
        }
        await this.refreshGraph();
    }
    async refreshGraph() {
        if (!this.currentImage || !this.currentGenome)
            return;
        const labels = await this.api.getLabels(this.currentImage);
        this.graph.render(this.currentGenome, labels);
        this.graph.highlight(this.sweep.connection);
    }
    async openSweep(connection, step = 0.1) {
        if (!this.currentImage)
            return;
        await this.guarded(async () => {
            const view = await this.api.sweep(this.currentImage, connection, step);
            this.query(".sweep-host").removeAttribute("hidden");
            this.sweep.show(view);
            this.graph.highlight(connection);
        });
    }
}
export function mount(root, base = "") {
    return new App(root, base);
}
if (typeof document !== "undefined" && document.getElementById("app")) {
    window.cppnstudio = mount(document.getElementById("app"));
}
