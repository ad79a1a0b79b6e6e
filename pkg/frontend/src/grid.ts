/// Population grid: the selection surface of the breeding loop.
///
/// Clicking a tile toggles its selection locally and on the server; the
/// next-generation control stays disabled until at least one tile is
/// selected. Stale population payloads (from an older generation) are
/// discarded so the grid always mirrors the newest acknowledged state.

import { PopulationView } from "./api.js";

export class PopulationGrid {
    public root: HTMLElement;
    public onToggle: (slot: number, selected: number[]) => void = () => {};
    public onPublish: (slot: number) => void = () => {};
    private view: PopulationView | null = null;

    constructor() {
        this.root = document.createElement("div");
        this.root.className = "population-grid";
    }

    get generation(): number {
        return this.view ? this.view.generation : -1;
    }

    selectedSlots(): number[] {
        if (!this.view) return [];
        return this.view.slots.filter((s) => s.selected).map((s) => s.slot);
    }

    /// Render a population payload; ignores payloads older than the current
    /// generation so late responses cannot clobber fresh state.
    render(view: PopulationView): boolean {
        if (this.view && this.view.session_id === view.session_id
                && view.generation < this.view.generation) {
            return false;
        }
        this.view = view;
        this.root.innerHTML = "";
        for (const slot of view.slots) {
            const tile = document.createElement("figure");
            tile.className = "tile" + (slot.selected ? " selected" : "");
            tile.dataset.slot = String(slot.slot);

            const img = document.createElement("img");
            img.src = view.generation >= 0
                ? `${slot.url}&generation=${view.generation}`
                : slot.url;
            img.alt = `slot ${slot.slot}`;
            img.width = view.image_size;
            img.height = view.image_size;
            tile.appendChild(img);

            const caption = document.createElement("figcaption");
            const label = document.createElement("span");
            label.textContent = `slot ${slot.slot}`;
            caption.appendChild(label);

            const publish = document.createElement("button");
            publish.type = "button";
            publish.className = "publish";
            publish.textContent = "publish";
            publish.addEventListener("click", (event) => {
                event.stopPropagation();
                this.onPublish(slot.slot);
            });
            caption.appendChild(publish);
            tile.appendChild(caption);

            tile.addEventListener("click", () => this.toggle(slot.slot));
            this.root.appendChild(tile);
        }
        return true;
    }

    toggle(slot: number): void {
        if (!this.view) return;
        const entry = this.view.slots.find((s) => s.slot === slot);
        if (!entry) return;
        entry.selected = !entry.selected;
        const tile = this.root.querySelector(`figure[data-slot="${slot}"]`);
        if (tile) tile.classList.toggle("selected", entry.selected);
        this.onToggle(slot, this.selectedSlots());
    }

    displayedImageUrls(): string[] {
        return Array.from(this.root.querySelectorAll("img")).map((img) => img.src);
    }
}
