/**
 * Deterministic chain coloring: the palette index comes from a hash of
 * the chain id, so a chain keeps its color across sessions and reloads.
 */

export const PALETTE = [
  "#e6194b", "#3cb44b", "#b8860b", "#4363d8", "#f58231", "#911eb4",
  "#008080", "#c71585", "#808000", "#9a6324", "#2f6f4f", "#555599",
];

/** FNV-1a over the UTF-16 code units; stable across platforms. */
export function hashString(value: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < value.length; i++) {
    hash ^= value.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function colorIndex(chainId: string): number {
  return hashString(chainId) % PALETTE.length;
}

export function chainColor(chainId: string): string {
  return PALETTE[colorIndex(chainId)];
}
