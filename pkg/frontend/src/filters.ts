// Filters & transforms panel. Rows are edited locally and applied in one
// shot; the service always applies filters before transforms, each group
// in the order listed here.

import type { FilterSpec, SchemaEntry, TransformSpec } from "./types.js";

const OPS: FilterSpec["op"][] = ["lt", "le", "gt", "ge", "eq", "ne"];

export class FiltersPanel {
  filters: FilterSpec[] = [];
  transforms: TransformSpec[] = [];
  onApply: (filters: FilterSpec[], transforms: TransformSpec[]) => void =
    () => {};

  private schema: SchemaEntry[] = [];
  private container: HTMLElement | null = null;

  setSchema(schema: SchemaEntry[]): void {
    this.schema = schema;
    this.filters = [];
    this.transforms = [];
    this.render();
  }

  mount(container: HTMLElement): void {
    this.container = container;
    this.render();
  }

  private defaultColumn(): string {
    return this.schema[0]?.name ?? "";
  }

  private columnSelect(value: string, onChange: (v: string) => void) {
    const select = document.createElement("select");
    for (const entry of this.schema) {
      const opt = document.createElement("option");
      opt.value = entry.name;
      opt.textContent = entry.name;
      opt.selected = entry.name === value;
      select.appendChild(opt);
    }
    select.addEventListener("change", () => onChange(select.value));
    return select;
  }

  private render(): void {
    if (!this.container) return;
    const c = this.container;
    c.replaceChildren();

    const filtersHead = document.createElement("div");
    filtersHead.className = "vc-section-head";
    filtersHead.textContent = "filters";
    const addFilter = document.createElement("button");
    addFilter.className = "vc-add-filter";
    addFilter.textContent = "+";
    addFilter.addEventListener("click", () => {
      this.filters.push({ column: this.defaultColumn(), op: "gt",
                          mode: "include", criterion: 0 });
      this.render();
    });
    filtersHead.appendChild(addFilter);
    c.appendChild(filtersHead);

    this.filters.forEach((f, i) => c.appendChild(this.filterRow(f, i)));

    const transformsHead = document.createElement("div");
    transformsHead.className = "vc-section-head";
    transformsHead.textContent = "transforms";
    const addTransform = document.createElement("button");
    addTransform.className = "vc-add-transform";
    addTransform.textContent = "+";
    addTransform.addEventListener("click", () => {
      this.transforms.push({ column: this.defaultColumn(), kind: "log" });
      this.render();
    });
    transformsHead.appendChild(addTransform);
    c.appendChild(transformsHead);

    this.transforms.forEach((t, i) => c.appendChild(this.transformRow(t, i)));

    const actions = document.createElement("div");
    actions.className = "vc-filter-actions";
    const apply = document.createElement("button");
    apply.className = "vc-apply-pipeline";
    apply.textContent = "apply";
    apply.addEventListener("click", () =>
      this.onApply([...this.filters], [...this.transforms]));
    actions.appendChild(apply);
    const removeAll = document.createElement("button");
    removeAll.className = "vc-remove-all";
    removeAll.textContent = "remove all";
    removeAll.addEventListener("click", () => {
      this.filters = [];
      this.transforms = [];
      this.render();
      this.onApply([], []);
    });
    actions.appendChild(removeAll);
    c.appendChild(actions);
  }

  private filterRow(f: FilterSpec, index: number): HTMLElement {
    const row = document.createElement("div");
    row.className = "vc-filter-row";

    const mode = document.createElement("select");
    for (const m of ["include", "exclude"] as const) {
      const opt = document.createElement("option");
      opt.value = m;
      opt.textContent = m;
      opt.selected = m === f.mode;
      mode.appendChild(opt);
    }
    mode.addEventListener("change", () => {
      f.mode = mode.value as FilterSpec["mode"];
    });
    row.appendChild(mode);

    row.appendChild(this.columnSelect(f.column, (v) => { f.column = v; }));

    const op = document.createElement("select");
    for (const o of OPS) {
      const opt = document.createElement("option");
      opt.value = o;
      opt.textContent = o;
      opt.selected = o === f.op;
      op.appendChild(opt);
    }
    op.addEventListener("change", () => {
      f.op = op.value as FilterSpec["op"];
    });
    row.appendChild(op);

    const criterion = document.createElement("input");
    criterion.value = String(f.criterion);
    criterion.addEventListener("input", () => {
      const num = Number(criterion.value);
      f.criterion = Number.isFinite(num) && criterion.value.trim() !== ""
        ? num : criterion.value;
    });
    row.appendChild(criterion);

    row.appendChild(this.removeButton(() => {
      this.filters.splice(index, 1);
      this.render();
    }));
    return row;
  }

  private transformRow(t: TransformSpec, index: number): HTMLElement {
    const row = document.createElement("div");
    row.className = "vc-transform-row";
    row.appendChild(this.columnSelect(t.column, (v) => { t.column = v; }));

    const kind = document.createElement("select");
    for (const k of ["log", "logit"] as const) {
      const opt = document.createElement("option");
      opt.value = k;
      opt.textContent = k === "logit" ? "log odds" : "log";
      opt.selected = k === t.kind;
      kind.appendChild(opt);
    }
    kind.addEventListener("change", () => {
      t.kind = kind.value as TransformSpec["kind"];
    });
    row.appendChild(kind);

    row.appendChild(this.removeButton(() => {
      this.transforms.splice(index, 1);
      this.render();
    }));
    return row;
  }

  private removeButton(onClick: () => void): HTMLElement {
    const btn = document.createElement("button");
    btn.className = "vc-remove";
    btn.textContent = "×";
    btn.addEventListener("click", onClick);
    return btn;
  }
}
