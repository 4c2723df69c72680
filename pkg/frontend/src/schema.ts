/**
 * Engagement-state schema: the seventeen raw fields the service scores.
 *
 * Validation rules mirror the backend's feature invariants exactly, so a
 * state that passes here is accepted by POST /api/v1/predict verbatim.
 */

export type Philosophy = "MAX_RANGE" | "MIDPOINT" | "NEZ";

export const PHILOSOPHIES: Philosophy[] = ["MAX_RANGE", "MIDPOINT", "NEZ"];

export interface EngagementState {
    distance: number;
    aspect: number;
    delta_head: number;
    delta_alt: number;
    delta_vel: number;
    wez_max_o2t: number;
    wez_nez_o2t: number;
    wez_max_t2o: number;
    wez_nez_t2o: number;
    vul_thr_bef_shot: number;
    vul_thr_aft_shot: number;
    shot_point: number;
    rwr_warning: boolean;
    hp_tgt_off: number;
    hp_thr_vul: number;
    own_shot_phi: Philosophy;
    enemy_shot_phi: Philosophy;
}

export type FieldKind = "number" | "boolean" | "philosophy";

export interface FieldSpec {
    name: keyof EngagementState;
    label: string;
    units: string;
    kind: FieldKind;
    min?: number;
    max?: number;
    /** WEZ fields accept the -1 "unknown" sentinel besides their range. */
    sentinel?: boolean;
    default: number | boolean | Philosophy;
}

export const FIELD_SPECS: FieldSpec[] = [
    { name: "distance", label: "Distance to target", units: "m", kind: "number", min: 0, default: 45000 },
    { name: "aspect", label: "Target aspect", units: "deg", kind: "number", min: 0, max: 180, default: 150 },
    { name: "delta_head", label: "Heading difference", units: "deg", kind: "number", min: 0, max: 180, default: 170 },
    { name: "delta_alt", label: "Altitude difference", units: "m", kind: "number", default: 0 },
    { name: "delta_vel", label: "Velocity difference", units: "kn", kind: "number", default: 0 },
    { name: "wez_max_o2t", label: "Own weapon max range", units: "m", kind: "number", min: 0, sentinel: true, default: 50000 },
    { name: "wez_nez_o2t", label: "Own weapon no-escape range", units: "m", kind: "number", min: 0, sentinel: true, default: 15000 },
    { name: "wez_max_t2o", label: "Target weapon max range", units: "m", kind: "number", min: 0, sentinel: true, default: 40000 },
    { name: "wez_nez_t2o", label: "Target weapon no-escape range", units: "m", kind: "number", min: 0, sentinel: true, default: 12000 },
    { name: "vul_thr_bef_shot", label: "Risk acceptance before shot", units: "", kind: "number", min: 0, max: 1, default: 0.5 },
    { name: "vul_thr_aft_shot", label: "Risk acceptance after shot", units: "", kind: "number", min: 0, max: 1, default: 0.5 },
    { name: "shot_point", label: "Shot point in envelope", units: "", kind: "number", min: 0, max: 1, default: 0.5 },
    { name: "rwr_warning", label: "RWR equipped", units: "", kind: "boolean", default: true },
    { name: "hp_tgt_off", label: "Offense index vs priority target", units: "", kind: "number", min: 0, max: 1, default: 0 },
    { name: "hp_thr_vul", label: "Vulnerability vs priority threat", units: "", kind: "number", min: 0, max: 1, default: 0 },
    { name: "own_shot_phi", label: "Own shot philosophy", units: "", kind: "philosophy", default: "MIDPOINT" },
    { name: "enemy_shot_phi", label: "Enemy shot philosophy", units: "", kind: "philosophy", default: "MIDPOINT" },
];

export function defaultState(): EngagementState {
    const state = {} as Record<string, number | boolean | string>;
    for (const spec of FIELD_SPECS) {
        state[spec.name] = spec.default;
    }
    return state as unknown as EngagementState;
}

/** Validate one field value; returns an error message or null. */
export function validateField(spec: FieldSpec, value: number | boolean | string): string | null {
    if (spec.kind === "boolean") {
        return typeof value === "boolean" ? null : "must be a boolean";
    }
    if (spec.kind === "philosophy") {
        return PHILOSOPHIES.includes(value as Philosophy)
            ? null
            : `must be one of ${PHILOSOPHIES.join(", ")}`;
    }
    const v = Number(value);
    if (!Number.isFinite(v)) {
        return "must be a number";
    }
    if (spec.sentinel && v === -1) {
        return null;
    }
    if (spec.min !== undefined && v < spec.min) {
        return spec.max !== undefined
            ? `must lie in [${spec.min}, ${spec.max}]`
            : `must be >= ${spec.min}${spec.sentinel ? " (or unknown)" : ""}`;
    }
    if (spec.max !== undefined && v > spec.max) {
        return `must lie in [${spec.min ?? "-inf"}, ${spec.max}]`;
    }
    return null;
}

/** Validate a whole state; returns a field -> message map (empty when valid). */
export function validateState(state: EngagementState): Partial<Record<keyof EngagementState, string>> {
    const errors: Partial<Record<keyof EngagementState, string>> = {};
    for (const spec of FIELD_SPECS) {
        const message = validateField(spec, state[spec.name]);
        if (message !== null) {
            errors[spec.name] = message;
        }
    }
    return errors;
}
