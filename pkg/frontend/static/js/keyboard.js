const KEY_ACTIONS = {
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
export function actionForKey(key) {
    return KEY_ACTIONS[key] ?? null;
}
export function bindKeyboard(target, handler) {
    target.addEventListener("keydown", (event) => {
        const element = event.target;
        if (element && ["INPUT", "TEXTAREA", "SELECT"].includes(element.tagName))
            return;
        const action = actionForKey(event.key);
        if (action) {
            event.preventDefault();
            handler(action);
        }
    });
}
