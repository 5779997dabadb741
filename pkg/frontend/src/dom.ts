/** Tiny DOM helpers shared by the views. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function errorPanel(message: string, onRetry: () => void): HTMLElement {
  const panel = el("div", "error-panel");
  panel.append(el("p", "error-message", message));
  const retry = el("button", "retry", "Retry");
  retry.type = "button";
  retry.addEventListener("click", onRetry);
  panel.append(retry);
  return panel;
}

export function breadcrumb(parts: { label: string; onClick?: () => void }[]): HTMLElement {
  const nav = el("nav", "breadcrumb");
  parts.forEach((part, index) => {
    if (index > 0) nav.append(el("span", "crumb-sep", " › "));
    if (part.onClick) {
      const link = el("a", "crumb", part.label) as HTMLAnchorElement;
      link.href = "#";
      link.addEventListener("click", (event) => {
        event.preventDefault();
        part.onClick?.();
      });
      nav.append(link);
    } else {
      nav.append(el("span", "crumb current", part.label));
    }
  });
  return nav;
}
