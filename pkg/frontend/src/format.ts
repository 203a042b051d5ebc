/**
 * Render a share in [0, 1] as a percentage, rounded half-up to two
 * decimals — the same display rule the server uses, so 0.15625 reads
 * "15.63%" everywhere.
 */
export function formatPercent(share: number): string {
  const scaled = share * 10000;
  const rounded = Math.floor(scaled) + (scaled - Math.floor(scaled) >= 0.5 ? 1 : 0);
  return (rounded / 100).toFixed(2) + "%";
}
