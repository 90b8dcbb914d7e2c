// The model bar: add/remove candidate models, pick a distribution family,
// type location (and, for scale-bearing families, scale) formulas, and read
// back the service's plain-language description of what each model asserts.
// Parse errors render inline with a caret at the reported character.

import { ApiError, WorkbenchClient } from "./api.js";
import type { FamilyInfo } from "./types.js";

export interface ModelEntryState {
  family: string;
  location: string;
  scale: string;
  modelId: string | null;
  converged: boolean | null;
  diagnostic: string | null;
  description: string[];
  error: { message: string; position: number | null } | null;
}

function newEntry(family: string): ModelEntryState {
  return {
    family,
    location: "",
    scale: "",
    modelId: null,
    converged: null,
    diagnostic: null,
    description: [],
    error: null,
  };
}

export class ModelBar {
  entries: ModelEntryState[] = [];
  onModelsChanged: (ids: string[]) => void = () => {};

  private container: HTMLElement | null = null;

  constructor(private client: WorkbenchClient, private families: FamilyInfo[],
              private getDatasetId: () => string | null) {}

  hasScale(family: string): boolean {
    return this.families.find((f) => f.kind === family)?.has_scale ?? false;
  }

  modelIds(): string[] {
    return this.entries.flatMap((e) => (e.modelId ? [e.modelId] : []));
  }

  addEntry(): void {
    this.entries.push(newEntry(this.families[0]?.kind ?? "normal"));
    this.render();
  }

  removeEntry(index: number): void {
    this.entries.splice(index, 1);
    this.render();
    this.onModelsChanged(this.modelIds());
  }

  async submit(index: number): Promise<void> {
    const entry = this.entries[index];
    const dataset = this.getDatasetId();
    if (!entry || !dataset || !entry.location.trim()) return;
    entry.error = null;
    try {
      const res = await this.client.fit({
        dataset,
        family: entry.family,
        location: entry.location,
        scale: this.hasScale(entry.family) ? entry.scale || null : null,
      });
      entry.modelId = res.model;
      entry.converged = res.converged;
      entry.diagnostic = res.diagnostic;
      entry.description = res.description;
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      entry.modelId = null;
      entry.converged = null;
      entry.description = [];
      entry.error = { message: err.message, position: err.position };
    }
    this.render();
    this.onModelsChanged(this.modelIds());
  }

  /** Refit every submitted entry, e.g. after the pipeline changed. */
  async refitAll(): Promise<void> {
    for (let i = 0; i < this.entries.length; i++) {
      if (this.entries[i].modelId !== null ||
          this.entries[i].description.length > 0) {
        await this.submit(i);
      }
    }
  }

  mount(container: HTMLElement): void {
    this.container = container;
    this.render();
  }

  private render(): void {
    if (!this.container) return;
    const c = this.container;
    c.replaceChildren();

    this.entries.forEach((entry, index) => {
      c.appendChild(this.renderEntry(entry, index));
    });

    const add = document.createElement("button");
    add.className = "vc-add-model";
    add.textContent = "+ model";
    add.addEventListener("click", () => this.addEntry());
    c.appendChild(add);
  }

  private renderEntry(entry: ModelEntryState, index: number): HTMLElement {
    const el = document.createElement("div");
    el.className = "vc-model-entry";
    el.dataset.index = String(index);

    const controls = document.createElement("div");
    controls.className = "vc-model-controls";

    const familySelect = document.createElement("select");
    familySelect.className = "vc-family";
    for (const f of this.families) {
      const opt = document.createElement("option");
      opt.value = f.kind;
      opt.textContent = f.kind;
      opt.selected = f.kind === entry.family;
      familySelect.appendChild(opt);
    }
    familySelect.addEventListener("change", () => {
      entry.family = familySelect.value;
      this.render();
    });
    controls.appendChild(familySelect);

    const location = document.createElement("input");
    location.className = "vc-location";
    location.placeholder = "outcome ~ predictors";
    location.value = entry.location;
    location.addEventListener("input", () => {
      entry.location = location.value;
    });
    controls.appendChild(location);

    if (this.hasScale(entry.family)) {
      const scale = document.createElement("input");
      scale.className = "vc-scale";
      scale.placeholder = "~ scale predictors";
      scale.value = entry.scale;
      scale.addEventListener("input", () => {
        entry.scale = scale.value;
      });
      controls.appendChild(scale);
    }

    const submit = document.createElement("button");
    submit.className = "vc-submit";
    submit.textContent = entry.modelId ? "refit" : "check";
    submit.addEventListener("click", () => void this.submit(index));
    controls.appendChild(submit);

    const remove = document.createElement("button");
    remove.className = "vc-remove";
    remove.textContent = "×";
    remove.addEventListener("click", () => this.removeEntry(index));
    controls.appendChild(remove);

    el.appendChild(controls);

    if (entry.error) {
      const err = document.createElement("div");
      err.className = "vc-model-error";
      const msg = document.createElement("div");
      msg.className = "vc-error-message";
      msg.textContent = entry.error.message;
      err.appendChild(msg);
      if (entry.error.position !== null) {
        const caret = document.createElement("pre");
        caret.className = "vc-error-caret";
        caret.textContent =
          `${entry.location}\n${" ".repeat(entry.error.position)}^`;
        err.appendChild(caret);
      }
      el.appendChild(err);
    }

    if (entry.converged === false) {
      const warn = document.createElement("div");
      warn.className = "vc-model-warning";
      warn.textContent = `did not converge: ${entry.diagnostic ?? "unknown"}`;
      el.appendChild(warn);
    }

    if (entry.description.length > 0) {
      const list = document.createElement("ul");
      list.className = "vc-description";
      for (const sentence of entry.description) {
        const li = document.createElement("li");
        li.className = "vc-description-sentence";
        li.textContent = sentence;
        list.appendChild(li);
      }
      el.appendChild(list);
    }
    return el;
  }
}
