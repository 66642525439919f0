import type { LabelValue } from "./types.js";

/** Every mouse-reachable action has a key, so the whole review flow can be
 * driven from the keyboard alone. */
export type UiAction =
  | { kind: "label"; label: LabelValue }
  | { kind: "next" }
  | { kind: "prev" }
  | { kind: "save" }
  | { kind: "retry" }
  | { kind: "back" }
  | { kind: "refresh" };

const KEY_ACTIONS: Record<string, UiAction> = {
  "1": { kind: "label", label: "aligned" },
  "2": { kind: "label", label: "partial" },
  "3": { kind: "label", label: "not_aligned" },
  j: { kind: "next" },
  ArrowDown: { kind: "next" },
  k: { kind: "prev" },
  ArrowUp: { kind: "prev" },
  Enter: { kind: "save" },
  s: { kind: "save" },
  r: { kind: "retry" },
  Escape: { kind: "back" },
  g: { kind: "refresh" },
};

export function actionForKey(key: string): UiAction | null {
  return KEY_ACTIONS[key] ?? null;
}

export function bindKeyboard(
  target: { addEventListener: Window["addEventListener"] },
  handler: (action: UiAction) => void,
): void {
  target.addEventListener("keydown", (event: KeyboardEvent) => {
    const element = event.target as HTMLElement | null;
    if (element && ["INPUT", "TEXTAREA", "SELECT"].includes(element.tagName)) return;
    const action = actionForKey(event.key);
    if (action) {
      event.preventDefault();
      handler(action);
    }
  });
}
