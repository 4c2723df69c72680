/**
 * What-if engagement explorer.
 *
 * All numerics come from the service: the page posts the raw state to
 * /api/v1/predict, renders the returned index on the gauge, and drives
 * /api/v1/sweep for single-factor sensitivity.  The model schema is
 * fetched at startup so the page reflects whatever model is loaded.
 */

import { ApiClient, ServiceError } from "./api.js";
import { StateForm } from "./form.js";
import { IndexGauge } from "./gauge.js";
import { SweepPanel } from "./sweep.js";

const BASE_URL_KEY = "bvrsim-base-url";

export function resolveBaseUrl(win: Window): string {
    try {
        const stored = win.localStorage.getItem(BASE_URL_KEY);
        if (stored) return stored;
    } catch {
        /* storage unavailable */
    }
    return win.location.origin && win.location.origin !== "null"
        ? win.location.origin
        : "http://127.0.0.1:8000";
}

export interface App {
    form: StateForm;
    gauge: IndexGauge;
    sweep: SweepPanel;
    client: ApiClient;
    banner: HTMLElement;
}

export function mountApp(doc: Document, client: ApiClient): App {
    const container = doc.getElementById("app") ?? doc.body;

    const banner = doc.createElement("div");
    banner.className = "error-banner";
    banner.hidden = true;
    container.appendChild(banner);

    const gauge = new IndexGauge(doc, 0.5);
    let predicting = false;
    const form = new StateForm(doc, async (state) => {
        if (predicting) return; // one prediction in flight at a time
        predicting = true;
        banner.hidden = true;
        try {
            const resp = await client.predict(state);
            gauge.update(resp.index);
        } catch (err) {
            gauge.markStale();
            banner.hidden = false;
            banner.textContent =
                err instanceof ServiceError
                    ? `service error ${err.status}: ${err.message}`
                    : `service unreachable: ${String(err)}`;
        } finally {
            predicting = false;
        }
    });
    const sweep = new SweepPanel(doc, client, () => form.state());
    form.root.addEventListener("input", () => sweep.baseChanged());
    form.root.addEventListener("change", () => sweep.baseChanged());

    const formSection = doc.createElement("section");
    formSection.className = "panel";
    formSection.appendChild(heading(doc, "Engagement state"));
    formSection.appendChild(form.root);

    const gaugeSection = doc.createElement("section");
    gaugeSection.className = "panel";
    gaugeSection.appendChild(heading(doc, "Predicted mission index"));
    gaugeSection.appendChild(gauge.root);

    const sweepSection = doc.createElement("section");
    sweepSection.className = "panel";
    sweepSection.appendChild(heading(doc, "Single-factor sweep"));
    sweepSection.appendChild(sweep.root);

    container.appendChild(formSection);
    container.appendChild(gaugeSection);
    container.appendChild(sweepSection);

    void client
        .modelInfo()
        .then((info) => {
            const note = doc.createElement("div");
            note.className = "model-note";
            note.textContent =
                `model ${info.model_id} (${info.n_trees} trees)` +
                (info.trained_at ? `, trained ${info.trained_at}` : "");
            gaugeSection.appendChild(note);
        })
        .catch(() => {
            banner.hidden = false;
            banner.textContent = "no model loaded on the service";
        });

    return { form, gauge, sweep, client, banner };
}

function heading(doc: Document, text: string): HTMLElement {
    const h = doc.createElement("h2");
    h.textContent = text;
    return h;
}

declare const window: Window | undefined;

if (typeof window !== "undefined" && typeof document !== "undefined") {
    const client = new ApiClient(resolveBaseUrl(window as Window));
    mountApp(document, client);
}
