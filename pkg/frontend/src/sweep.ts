/// Sweep explorer: a slider scrubbing preloaded frames of one connection's
/// weight sweep. The slider snaps to the frame grid (61 detents by default,
/// 601 in fine mode) and the displayed frame always corresponds to the
/// slider's weight; a label form attaches a name and color to the swept
/// connection.

import { ApiClient, LabelDoc, SweepView } from "./api.js";

export class SweepExplorer {
    public root: HTMLElement;
    public onLabeled: (connection: number, label: LabelDoc) => void = () => {};
    public onFineToggle: (fine: boolean) => void = () => {};
    private view: SweepView | null = null;
    private slider: HTMLInputElement;
    private frameImg: HTMLImageElement;
    private weightLabel: HTMLElement;
    private impactLabel: HTMLElement;
    private nameInput: HTMLInputElement;
    private colorInput: HTMLInputElement;
    private fineToggle: HTMLInputElement;
    private status: HTMLElement;

    constructor(private api: ApiClient) {
        this.root = document.createElement("section");
        this.root.className = "sweep-explorer";
        this.root.innerHTML = `
            <header>
              <h3>sweep <span class="conn"></span></h3>
              <label class="fine"><input type="checkbox" class="fine-toggle"> fine (0.01)</label>
            </header>
            <div class="filmstrip">
              <img class="frame" alt="sweep frame">
              <div class="readout">
                <span class="weight"></span>
                <span class="impact"></span>
              </div>
              <input type="range" class="scrubber" min="0" step="1" value="0">
            </div>
            <form class="label-form">
              <input type="text" class="label-name" placeholder="label this connection">
              <input type="color" class="label-color" value="#d62728">
              <button type="submit">save label</button>
              <span class="status"></span>
            </form>`;
        this.slider = this.root.querySelector(".scrubber") as HTMLInputElement;
        this.frameImg = this.root.querySelector(".frame") as HTMLImageElement;
        this.weightLabel = this.root.querySelector(".weight") as HTMLElement;
        this.impactLabel = this.root.querySelector(".impact") as HTMLElement;
        this.nameInput = this.root.querySelector(".label-name") as HTMLInputElement;
        this.colorInput = this.root.querySelector(".label-color") as HTMLInputElement;
        this.fineToggle = this.root.querySelector(".fine-toggle") as HTMLInputElement;
        this.status = this.root.querySelector(".status") as HTMLElement;

        this.slider.addEventListener("input", () => {
            this.showFrame(Number(this.slider.value));
        });
        this.fineToggle.addEventListener("change", () => {
            this.onFineToggle(this.fineToggle.checked);
        });
        (this.root.querySelector(".label-form") as HTMLFormElement)
            .addEventListener("submit", (event) => {
                event.preventDefault();
                void this.submitLabel();
            });
    }

    /// Number of slider detents (frames) currently exposed.
    get detents(): number {
        return this.view ? this.view.frames.length : 0;
    }

    get connection(): number | null {
        return this.view ? this.view.connection : null;
    }

    displayedFrameUrl(): string {
        return this.frameImg.src;
    }

    sliderIndex(): number {
        return Number(this.slider.value);
    }

    /// Load a sweep and preload every frame so scrubbing is instant.
    show(view: SweepView): void {
        this.view = view;
        (this.root.querySelector(".conn") as HTMLElement).textContent =
            `connection ${view.connection}`;
        this.slider.max = String(view.frames.length - 1);
        this.impactLabel.textContent =
            `changed fraction ${view.impact.changed_fraction.toFixed(3)}`;
        for (const frame of view.frames) {
            const img = new Image();
            img.src = frame.url;  // browser cache warm-up
        }
        // start at the frame nearest the baseline weight so the slider
        // position matches the plain image view
        let start = 0;
        let best = Infinity;
        view.frames.forEach((frame, index) => {
            const gap = Math.abs(frame.weight - view.baseline_weight);
            if (gap < best) {
                best = gap;
                start = index;
            }
        });
        this.slider.value = String(start);
        this.showFrame(start);
    }

    showFrame(index: number): void {
        if (!this.view) return;
        const frame = this.view.frames[index];
        if (!frame) return;
        this.frameImg.src = frame.url;
        this.weightLabel.textContent = `weight ${frame.weight.toFixed(
            this.view.step < 0.1 ? 2 : 1)}`;
    }

    setSlider(index: number): void {
        this.slider.value = String(index);
        this.showFrame(index);
    }

    private async submitLabel(): Promise<void> {
        if (!this.view || this.nameInput.value.trim() === "") return;
        const label = { name: this.nameInput.value.trim(),
                        color: this.colorInput.value };
        try {
            const existing = await this.api.getLabels(this.view.image_id);
            existing.labels[String(this.view.connection)] = label;
            await this.api.putLabels(this.view.image_id, existing.labels);
            this.status.textContent = `labeled "${label.name}"`;
            this.onLabeled(this.view.connection, label);
        } catch (err) {
            this.status.textContent = `label failed: ${(err as Error).message}`;
        }
    }

    async applyLabel(name: string, color: string): Promise<void> {
        this.nameInput.value = name;
        this.colorInput.value = color;
        await this.submitLabel();
    }
}
