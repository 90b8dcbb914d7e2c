// Pill list and encoding shelves. Pills are draggable variables; shelves
// are x/y/row/column drop targets holding at most one pill each. Facet
// shelves (row, column) accept only discrete variables and flash a
// rejection otherwise.

import type { SchemaEntry } from "./types.js";

export type ShelfName = "x" | "y" | "row" | "column";
export const SHELF_NAMES: ShelfName[] = ["x", "y", "row", "column"];

export interface ShelfAssignments {
  x: string | null;
  y: string | null;
  row: string | null;
  column: string | null;
}

export class Shelves {
  assignments: ShelfAssignments = { x: null, y: null, row: null, column: null };
  onChange: (a: ShelfAssignments) => void = () => {};

  private schema: SchemaEntry[] = [];
  private container: HTMLElement | null = null;
  private dragging: string | null = null;

  setSchema(schema: SchemaEntry[]): void {
    this.schema = schema;
    this.assignments = { x: null, y: null, row: null, column: null };
    this.render();
  }

  entry(variable: string): SchemaEntry | undefined {
    return this.schema.find((e) => e.name === variable);
  }

  canAccept(shelf: ShelfName, variable: string): boolean {
    const entry = this.entry(variable);
    if (!entry) return false;
    if ((shelf === "row" || shelf === "column") && entry.type !== "discrete") {
      return false;
    }
    return true;
  }

  /** Returns true when the drop was accepted. */
  assign(shelf: ShelfName, variable: string): boolean {
    if (!this.canAccept(shelf, variable)) {
      this.flashReject(shelf);
      return false;
    }
    this.assignments[shelf] = variable;
    this.render();
    this.onChange({ ...this.assignments });
    return true;
  }

  clear(shelf: ShelfName): void {
    if (this.assignments[shelf] === null) return;
    this.assignments[shelf] = null;
    this.render();
    this.onChange({ ...this.assignments });
  }

  mount(container: HTMLElement): void {
    this.container = container;
    this.render();
  }

  private flashReject(shelf: ShelfName): void {
    const zone = this.container?.querySelector(
      `.vc-shelf[data-shelf="${shelf}"]`);
    if (!zone) return;
    zone.classList.add("vc-reject");
    setTimeout(() => zone.classList.remove("vc-reject"), 500);
  }

  private render(): void {
    if (!this.container) return;
    const c = this.container;
    c.replaceChildren();

    const pillList = document.createElement("div");
    pillList.className = "vc-pill-list";
    for (const entry of this.schema) {  // source order
      const pill = document.createElement("span");
      pill.className = `vc-pill vc-pill-${entry.type}`;
      pill.draggable = true;
      pill.dataset.variable = entry.name;
      pill.textContent = entry.name;
      const badge = document.createElement("small");
      badge.className = "vc-type-badge";
      badge.textContent = entry.type === "discrete" ? "D" : "C";
      pill.appendChild(badge);
      pill.addEventListener("dragstart", () => {
        this.dragging = entry.name;
      });
      pillList.appendChild(pill);
    }
    c.appendChild(pillList);

    for (const shelf of SHELF_NAMES) {
      const row = document.createElement("div");
      row.className = "vc-shelf-row";
      const label = document.createElement("label");
      label.textContent = shelf;
      row.appendChild(label);

      const zone = document.createElement("div");
      zone.className = "vc-shelf";
      zone.dataset.shelf = shelf;
      const assigned = this.assignments[shelf];
      if (assigned) {
        const pill = document.createElement("span");
        pill.className = "vc-pill vc-pill-assigned";
        pill.textContent = assigned;
        const x = document.createElement("button");
        x.className = "vc-remove";
        x.textContent = "×";
        x.addEventListener("click", () => this.clear(shelf));
        pill.appendChild(x);
        zone.appendChild(pill);
      } else {
        zone.classList.add("vc-shelf-empty");
      }
      zone.addEventListener("dragover", (ev) => ev.preventDefault());
      zone.addEventListener("drop", (ev) => {
        ev.preventDefault();
        if (this.dragging) this.assign(shelf, this.dragging);
        this.dragging = null;
      });
      row.appendChild(zone);
      c.appendChild(row);
    }
  }
}
