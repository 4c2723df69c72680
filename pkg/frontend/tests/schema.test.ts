import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { describe, expect, it } from "vitest";

import {
    FIELD_SPECS,
    PHILOSOPHIES,
    defaultState,
    validateField,
    validateState,
} from "../src/schema.js";

const spec = (name: string) => FIELD_SPECS.find((s) => s.name === name)!;

// JSON schema generated from the service's request model; the backend test
// suite asserts the fixture stays current.
const generated = JSON.parse(
    readFileSync(resolve(process.cwd(), "schema.fixture.json"), "utf-8"),
) as {
    properties: Record<string, { minimum?: number; maximum?: number; enum?: string[]; type?: string }>;
    required: string[];
};

describe("field validation mirrors the backend invariants", () => {
    it("bounds angular fields to [0, 180]", () => {
        expect(validateField(spec("aspect"), 200)).toMatch(/\[0, 180\]/);
        expect(validateField(spec("aspect"), -5)).toMatch(/\[0, 180\]/);
        expect(validateField(spec("aspect"), 180)).toBeNull();
        expect(validateField(spec("delta_head"), 181)).toMatch(/\[0, 180\]/);
    });

    it("bounds index and threshold fields to [0, 1]", () => {
        for (const name of ["vul_thr_bef_shot", "vul_thr_aft_shot", "shot_point", "hp_tgt_off", "hp_thr_vul"]) {
            expect(validateField(spec(name), 1.2)).not.toBeNull();
            expect(validateField(spec(name), -0.1)).not.toBeNull();
            expect(validateField(spec(name), 0.7)).toBeNull();
        }
    });

    it("accepts the -1 sentinel on WEZ fields only", () => {
        for (const name of ["wez_max_o2t", "wez_nez_o2t", "wez_max_t2o", "wez_nez_t2o"]) {
            expect(validateField(spec(name), -1)).toBeNull();
            expect(validateField(spec(name), -3)).not.toBeNull();
            expect(validateField(spec(name), 25000)).toBeNull();
        }
        expect(validateField(spec("distance"), -1)).not.toBeNull();
    });

    it("rejects unknown philosophies", () => {
        expect(validateField(spec("own_shot_phi"), "YOLO")).toMatch(/MAX_RANGE/);
        expect(validateField(spec("own_shot_phi"), "NEZ")).toBeNull();
    });

    it("rejects non-numeric input", () => {
        expect(validateField(spec("distance"), "abc")).toBe("must be a number");
        expect(validateField(spec("distance"), NaN)).toBe("must be a number");
    });

    it("signed difference fields are unbounded", () => {
        expect(validateField(spec("delta_alt"), -4000)).toBeNull();
        expect(validateField(spec("delta_vel"), -120)).toBeNull();
    });

    it("default state is valid and complete", () => {
        const state = defaultState();
        expect(Object.keys(state)).toHaveLength(17);
        expect(validateState(state)).toEqual({});
    });
});

describe("field specs track the service's generated JSON schema", () => {
    it("covers exactly the required fields", () => {
        const names = FIELD_SPECS.map((s) => s.name).sort();
        expect(names).toEqual([...generated.required].sort());
    });

    it("numeric bounds match, sentinel fields relax the floor only", () => {
        for (const fieldSpec of FIELD_SPECS) {
            const prop = generated.properties[fieldSpec.name];
            expect(prop, fieldSpec.name).toBeDefined();
            if (fieldSpec.kind === "philosophy") {
                expect(prop.enum).toEqual(PHILOSOPHIES);
                continue;
            }
            if (fieldSpec.kind === "boolean") {
                expect(prop.type).toBe("boolean");
                continue;
            }
            if (prop.maximum !== undefined || fieldSpec.max !== undefined) {
                expect(fieldSpec.max, fieldSpec.name).toBe(prop.maximum);
            }
            if (fieldSpec.sentinel) {
                // service validates the sentinel in code, not in the schema
                expect(fieldSpec.min).toBe(0);
            } else if (prop.minimum !== undefined || fieldSpec.min !== undefined) {
                expect(fieldSpec.min, fieldSpec.name).toBe(prop.minimum);
            }
        }
    });
});
