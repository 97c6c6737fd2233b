// Small DOM construction helpers; no framework, views are plain elements.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

/** Replace node's children with an inline error line, or hide it. */
export function showError(node: HTMLElement, message: string | null): void {
  clear(node);
  if (message !== null) {
    node.append(message);
    node.style.display = "";
  } else {
    node.style.display = "none";
  }
}
