/**
 * Single-factor sweep panel: pick a field, query the sweep endpoint with
 * the current base state, and chart index vs swept value as an SVG line
 * (bars for categorical sweeps).  The last three sweeps stay on the chart
 * for comparison; the base state's own value is marked.
 */

import type { ApiClient, SweepPoint } from "./api.js";
import { EngagementState, FIELD_SPECS } from "./schema.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 460;
const HEIGHT = 220;
const PAD = 36;
const SERIES_COLORS = ["#0b61d8", "#9047c9", "#b8b8b8"];

export interface SweepSeries {
    field: string;
    points: SweepPoint[];
    baseValue: number | string;
}

export function numericSweepFields(): string[] {
    return FIELD_SPECS.filter((s) => s.kind === "number").map((s) => s.name);
}

export function categoricalSweepFields(): string[] {
    return FIELD_SPECS.filter((s) => s.kind === "philosophy").map((s) => s.name);
}

export class SweepPanel {
    readonly root: HTMLElement;
    private doc: Document;
    private client: ApiClient;
    private baseProvider: () => EngagementState;
    private history: SweepSeries[] = [];
    private chart: SVGSVGElement;
    private status: HTMLElement;
    private inFlight = false;
    private requeryTimer: ReturnType<typeof setTimeout> | null = null;
    fieldSelect: HTMLSelectElement;
    loInput: HTMLInputElement;
    hiInput: HTMLInputElement;
    stepsInput: HTMLInputElement;

    constructor(doc: Document, client: ApiClient, baseProvider: () => EngagementState) {
        this.doc = doc;
        this.client = client;
        this.baseProvider = baseProvider;
        this.root = doc.createElement("section");
        this.root.className = "sweep-panel";

        const controls = doc.createElement("div");
        controls.className = "sweep-controls";
        this.fieldSelect = doc.createElement("select");
        for (const name of [...numericSweepFields(), ...categoricalSweepFields()]) {
            const option = doc.createElement("option");
            option.value = name;
            option.textContent = name;
            this.fieldSelect.appendChild(option);
        }
        this.fieldSelect.value = "distance";
        this.loInput = this.numberInput("10000");
        this.hiInput = this.numberInput("90000");
        this.stepsInput = this.numberInput("50");
        const run = doc.createElement("button");
        run.type = "button";
        run.textContent = "Sweep";
        run.addEventListener("click", () => void this.run());
        for (const el of [this.fieldSelect, this.loInput, this.hiInput, this.stepsInput, run]) {
            controls.appendChild(el);
        }
        this.root.appendChild(controls);

        this.status = doc.createElement("div");
        this.status.className = "sweep-status";
        this.root.appendChild(this.status);

        this.chart = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
        this.chart.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
        this.chart.setAttribute("width", String(WIDTH));
        this.chart.setAttribute("height", String(HEIGHT));
        this.root.appendChild(this.chart);
    }

    private numberInput(value: string): HTMLInputElement {
        const input = this.doc.createElement("input");
        input.type = "number";
        input.setAttribute("step", "any");
        input.value = value;
        return input;
    }

    /** Client-side gate mirroring the service's sweep-spec rules. */
    validateSpec(): string | null {
        if (categoricalSweepFields().includes(this.fieldSelect.value)) {
            return null;
        }
        const lo = Number(this.loInput.value);
        const hi = Number(this.hiInput.value);
        const steps = Number(this.stepsInput.value);
        if (!Number.isFinite(lo) || !Number.isFinite(hi) || !(lo < hi)) {
            return "sweep needs lo < hi";
        }
        if (!Number.isInteger(steps) || steps < 2 || steps > 500) {
            return "steps must be an integer in [2, 500]";
        }
        return null;
    }

    /** Re-run the newest sweep after the base state changed (debounced). */
    baseChanged(delayMs = 300): void {
        if (this.history.length === 0) return;
        if (this.requeryTimer !== null) clearTimeout(this.requeryTimer);
        this.requeryTimer = setTimeout(() => {
            this.requeryTimer = null;
            void this.run();
        }, delayMs);
    }

    async run(): Promise<SweepSeries | null> {
        if (this.inFlight) {
            return null; // one request per panel at a time
        }
        const problem = this.validateSpec();
        if (problem !== null) {
            this.status.textContent = problem;
            return null;
        }
        const field = this.fieldSelect.value;
        const base = this.baseProvider();
        this.status.textContent = "querying...";
        this.inFlight = true;
        try {
            const points = categoricalSweepFields().includes(field)
                ? await this.client.sweepCategorical(base, field)
                : await this.client.sweepNumeric(base, {
                      field,
                      lo: Number(this.loInput.value),
                      hi: Number(this.hiInput.value),
                      steps: Number(this.stepsInput.value),
                  });
            const series: SweepSeries = {
                field,
                points,
                baseValue: base[field as keyof EngagementState] as number | string,
            };
            this.history.unshift(series);
            this.history = this.history.slice(0, 3);
            this.status.textContent = `${points.length} points, field ${field}`;
            this.render();
            return series;
        } catch (err) {
            this.status.textContent = `sweep failed: ${String(err)}`;
            return null;
        } finally {
            this.inFlight = false;
        }
    }

    get series(): SweepSeries[] {
        return this.history;
    }

    private render(): void {
        while (this.chart.firstChild) {
            this.chart.removeChild(this.chart.firstChild);
        }
        const axis = this.doc.createElementNS(SVG_NS, "path");
        axis.setAttribute(
            "d",
            `M ${PAD} ${PAD} L ${PAD} ${HEIGHT - PAD} L ${WIDTH - PAD} ${HEIGHT - PAD}`,
        );
        axis.setAttribute("class", "axis");
        axis.setAttribute("fill", "none");
        axis.setAttribute("stroke", "#444");
        this.chart.appendChild(axis);

        const newest = this.history[0];
        if (!newest) return;
        const categorical = typeof newest.points[0]?.value === "string";
        if (categorical) {
            this.renderBars(newest);
            return;
        }
        for (let s = this.history.length - 1; s >= 0; s--) {
            const series = this.history[s];
            if (typeof series.points[0]?.value === "string") continue;
            this.renderLine(series, SERIES_COLORS[s] ?? "#cccccc", s === 0);
        }
    }

    private scales(points: SweepPoint[]) {
        const xs = points.map((p) => Number(p.value));
        const xMin = Math.min(...xs);
        const xMax = Math.max(...xs);
        const spanX = xMax - xMin || 1;
        return {
            x: (v: number) => PAD + ((v - xMin) / spanX) * (WIDTH - 2 * PAD),
            y: (index: number) => HEIGHT - PAD - index * (HEIGHT - 2 * PAD),
        };
    }

    private renderLine(series: SweepSeries, color: string, markBase: boolean): void {
        const { x, y } = this.scales(series.points);
        const line = this.doc.createElementNS(SVG_NS, "polyline");
        line.setAttribute(
            "points",
            series.points.map((p) => `${x(Number(p.value))},${y(p.index)}`).join(" "),
        );
        line.setAttribute("fill", "none");
        line.setAttribute("stroke", color);
        line.setAttribute("class", "sweep-line");
        line.setAttribute("data-points", String(series.points.length));
        this.chart.appendChild(line);
        if (markBase && typeof series.baseValue === "number") {
            const marker = this.doc.createElementNS(SVG_NS, "line");
            const bx = x(series.baseValue);
            marker.setAttribute("x1", String(bx));
            marker.setAttribute("x2", String(bx));
            marker.setAttribute("y1", String(PAD));
            marker.setAttribute("y2", String(HEIGHT - PAD));
            marker.setAttribute("stroke", "#d03020");
            marker.setAttribute("stroke-dasharray", "4 3");
            marker.setAttribute("class", "base-marker");
            this.chart.appendChild(marker);
        }
    }

    private renderBars(series: SweepSeries): void {
        const n = series.points.length;
        const band = (WIDTH - 2 * PAD) / n;
        series.points.forEach((p, i) => {
            const bar = this.doc.createElementNS(SVG_NS, "rect");
            const h = p.index * (HEIGHT - 2 * PAD);
            bar.setAttribute("x", String(PAD + i * band + band * 0.15));
            bar.setAttribute("y", String(HEIGHT - PAD - h));
            bar.setAttribute("width", String(band * 0.7));
            bar.setAttribute("height", String(h));
            bar.setAttribute("fill", p.value === series.baseValue ? "#d03020" : "#0b61d8");
            bar.setAttribute("class", "sweep-bar");
            this.chart.appendChild(bar);
            const label = this.doc.createElementNS(SVG_NS, "text");
            label.setAttribute("x", String(PAD + i * band + band * 0.5));
            label.setAttribute("y", String(HEIGHT - PAD + 14));
            label.setAttribute("text-anchor", "middle");
            label.setAttribute("font-size", "10");
            label.textContent = String(p.value);
            this.chart.appendChild(label);
        });
    }
}
