/**
 * Index gauge: a horizontal bar for the predicted index in [0, 1] with an
 * adjustable decision-threshold marker.  The comparison is also stated as
 * text so the reading is accessible without color perception.
 */

export type ThresholdRelation = "above threshold" | "at threshold" | "below threshold";

export function thresholdRelation(index: number, threshold: number): ThresholdRelation {
    if (index > threshold) return "above threshold";
    if (index < threshold) return "below threshold";
    return "at threshold";
}

export class IndexGauge {
    readonly root: HTMLElement;
    private bar: HTMLElement;
    private marker: HTMLElement;
    private valueText: HTMLElement;
    private relationText: HTMLElement;
    private thresholdInput: HTMLInputElement;
    private lastIndex: number | null = null;

    constructor(doc: Document, threshold = 0.5) {
        this.root = doc.createElement("div");
        this.root.className = "gauge";
        this.root.innerHTML = `
            <div class="gauge-track">
                <div class="gauge-bar" data-role="bar"></div>
                <div class="gauge-marker" data-role="marker"></div>
            </div>
            <div class="gauge-text">
                <span data-role="value">no prediction yet</span>
                <span data-role="relation"></span>
            </div>
            <label class="gauge-threshold">
                engage threshold
                <input data-role="threshold" type="range" min="0" max="1" step="0.01" />
                <span data-role="threshold-value"></span>
            </label>`;
        this.bar = this.root.querySelector('[data-role="bar"]') as HTMLElement;
        this.marker = this.root.querySelector('[data-role="marker"]') as HTMLElement;
        this.valueText = this.root.querySelector('[data-role="value"]') as HTMLElement;
        this.relationText = this.root.querySelector('[data-role="relation"]') as HTMLElement;
        this.thresholdInput = this.root.querySelector('[data-role="threshold"]') as HTMLInputElement;
        this.thresholdInput.value = String(threshold);
        this.thresholdInput.addEventListener("input", () => this.render());
        this.render();
    }

    get threshold(): number {
        return Number(this.thresholdInput.value);
    }

    set threshold(value: number) {
        this.thresholdInput.value = String(value);
        this.render();
    }

    update(index: number): void {
        this.lastIndex = index;
        this.root.classList.remove("stale");
        this.render();
    }

    /** Grey out the last value when the service failed. */
    markStale(): void {
        this.root.classList.add("stale");
    }

    private render(): void {
        const threshold = this.threshold;
        this.marker.style.left = `${threshold * 100}%`;
        const thresholdValue = this.root.querySelector('[data-role="threshold-value"]') as HTMLElement;
        thresholdValue.textContent = threshold.toFixed(2);
        if (this.lastIndex === null) {
            this.relationText.textContent = "";
            this.bar.style.width = "0%";
            return;
        }
        this.bar.style.width = `${this.lastIndex * 100}%`;
        this.valueText.textContent = `index ${this.lastIndex.toFixed(3)}`;
        this.relationText.textContent = thresholdRelation(this.lastIndex, threshold);
    }
}
