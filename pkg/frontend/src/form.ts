/**
 * Engagement-state form: one row per schema field with inline validation,
 * philosophy dropdowns, and an "unknown (-1)" toggle on the WEZ fields.
 * Submit stays disabled until every field validates.
 */

import {
    EngagementState,
    FIELD_SPECS,
    FieldSpec,
    PHILOSOPHIES,
    defaultState,
    validateField,
} from "./schema.js";

export class StateForm {
    readonly root: HTMLElement;
    readonly submit: HTMLButtonElement;
    private doc: Document;
    private inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
    private sentinels = new Map<string, HTMLInputElement>();
    private errors = new Map<string, HTMLElement>();
    private onSubmit: (state: EngagementState) => void;

    constructor(doc: Document, onSubmit: (state: EngagementState) => void) {
        this.doc = doc;
        this.onSubmit = onSubmit;
        this.root = doc.createElement("form");
        this.root.className = "state-form";
        for (const spec of FIELD_SPECS) {
            this.root.appendChild(this.buildRow(spec));
        }
        this.submit = doc.createElement("button");
        this.submit.type = "submit";
        this.submit.textContent = "Predict";
        this.root.appendChild(this.submit);
        this.root.addEventListener("submit", (ev) => {
            ev.preventDefault();
            if (!this.submit.disabled) {
                this.onSubmit(this.state());
            }
        });
        this.refresh();
    }

    private buildRow(spec: FieldSpec): HTMLElement {
        const row = this.doc.createElement("label");
        row.className = "field-row";
        row.dataset.field = spec.name;
        const caption = this.doc.createElement("span");
        caption.textContent = spec.units ? `${spec.label} [${spec.units}]` : spec.label;
        row.appendChild(caption);

        let input: HTMLInputElement | HTMLSelectElement;
        if (spec.kind === "philosophy") {
            input = this.doc.createElement("select");
            for (const phi of PHILOSOPHIES) {
                const option = this.doc.createElement("option");
                option.value = phi;
                option.textContent = phi;
                input.appendChild(option);
            }
            input.value = String(spec.default);
        } else if (spec.kind === "boolean") {
            input = this.doc.createElement("input");
            input.type = "checkbox";
            (input as HTMLInputElement).checked = Boolean(spec.default);
        } else {
            input = this.doc.createElement("input");
            input.type = "number";
            input.setAttribute("step", "any");
            input.value = String(spec.default);
        }
        input.setAttribute("name", spec.name);
        input.addEventListener("input", () => this.refresh());
        input.addEventListener("change", () => this.refresh());
        this.inputs.set(spec.name, input);
        row.appendChild(input);

        if (spec.sentinel) {
            const toggleLabel = this.doc.createElement("span");
            toggleLabel.className = "sentinel-toggle";
            const toggle = this.doc.createElement("input");
            toggle.type = "checkbox";
            toggle.setAttribute("name", `${spec.name}__unknown`);
            toggle.addEventListener("change", () => {
                (input as HTMLInputElement).disabled = toggle.checked;
                this.refresh();
            });
            toggleLabel.appendChild(toggle);
            toggleLabel.appendChild(this.doc.createTextNode(" unknown (-1)"));
            this.sentinels.set(spec.name, toggle);
            row.appendChild(toggleLabel);
        }

        const error = this.doc.createElement("span");
        error.className = "field-error";
        this.errors.set(spec.name, error);
        row.appendChild(error);
        return row;
    }

    /** The state exactly as it will be POSTed. */
    state(): EngagementState {
        const out = defaultState() as unknown as Record<string, number | boolean | string>;
        for (const spec of FIELD_SPECS) {
            const input = this.inputs.get(spec.name)!;
            if (spec.kind === "boolean") {
                out[spec.name] = (input as HTMLInputElement).checked;
            } else if (spec.kind === "philosophy") {
                out[spec.name] = input.value;
            } else if (this.sentinels.get(spec.name)?.checked) {
                out[spec.name] = -1;
            } else {
                out[spec.name] = input.value === "" ? NaN : Number(input.value);
            }
        }
        return out as unknown as EngagementState;
    }

    setState(state: Partial<EngagementState>): void {
        for (const spec of FIELD_SPECS) {
            const value = state[spec.name];
            if (value === undefined) continue;
            const input = this.inputs.get(spec.name)!;
            if (spec.kind === "boolean") {
                (input as HTMLInputElement).checked = Boolean(value);
            } else if (spec.sentinel && value === -1) {
                this.sentinels.get(spec.name)!.checked = true;
                (input as HTMLInputElement).disabled = true;
            } else {
                if (spec.sentinel) {
                    this.sentinels.get(spec.name)!.checked = false;
                    (input as HTMLInputElement).disabled = false;
                }
                input.value = String(value);
            }
        }
        this.refresh();
    }

    /** Re-validate all fields, paint inline errors, gate the submit button. */
    refresh(): void {
        const state = this.state() as unknown as Record<string, number | boolean | string>;
        let valid = true;
        for (const spec of FIELD_SPECS) {
            const message = validateField(spec, state[spec.name]);
            this.errors.get(spec.name)!.textContent = message ?? "";
            if (message !== null) valid = false;
        }
        this.submit.disabled = !valid;
    }
}
