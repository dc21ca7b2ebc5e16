/** Greedy longest-match subword tokenizer with word-piece style
 * continuations ("##"). The vocabulary is induced once (alongside encoder
 * pretraining) and shipped with the checkpoint; unknown characters fall back
 * to [UNK] so arbitrary input never fails. */

const UNK = "[UNK]";
const PUNCT = /^[\p{P}\p{S}]+$/u;

export function isPunctuation(token: string): boolean {
  return PUNCT.test(token.trim()) || token.trim().length === 0;
}

export class Tokenizer {
  readonly pieces: string[];
  private ids: Map<string, number>;

  constructor(pieces: string[]) {
    if (!pieces.includes(UNK)) {
      pieces = [UNK, ...pieces];
    }
    this.pieces = pieces;
    this.ids = new Map(pieces.map((p, i) => [p, i]));
  }

  get size(): number {
    return this.pieces.length;
  }

  get unkId(): number {
    return this.ids.get(UNK)!;
  }

  /** Sub-token ids for one word. Greedy longest match; continuations use
   * the ## prefix; an unmatched character becomes [UNK] and advances by 1. */
  encodeWord(word: string): number[] {
    const chars = [...word.toLowerCase()];
    const out: number[] = [];
    let pos = 0;
    while (pos < chars.length) {
      let match = -1;
      let matchLen = 0;
      const maxLen = chars.length - pos;
      for (let len = Math.min(maxLen, 8); len >= 1; len--) {
        const raw = chars.slice(pos, pos + len).join("");
        const piece = pos === 0 ? raw : "##" + raw;
        const id = this.ids.get(piece);
        if (id !== undefined) {
          match = id;
          matchLen = len;
          break;
        }
      }
      if (match < 0) {
        out.push(this.unkId);
        pos += 1;
      } else {
        out.push(match);
        pos += matchLen;
      }
    }
    return out.length ? out : [this.unkId];
  }

  decodePiece(id: number): string {
    return this.pieces[id] ?? UNK;
  }

  toJSON(): string[] {
    return this.pieces;
  }

  static fromJSON(pieces: string[]): Tokenizer {
    return new Tokenizer(pieces);
  }
}

/** Build a vocabulary from a word list: full character coverage plus the
 * most frequent longer fragments, scored by frequency times saved length. */
export function induceVocab(words: string[], maxSize = 512): Tokenizer {
  const charPieces = new Set<string>();
  const fragmentCounts = new Map<string, number>();
  for (const word of words) {
    const chars = [...word.toLowerCase()];
    chars.forEach((ch, i) => charPieces.add(i === 0 ? ch : "##" + ch));
    for (let start = 0; start < chars.length; start++) {
      for (let len = 2; len <= 6 && start + len <= chars.length; len++) {
        const raw = chars.slice(start, start + len).join("");
        const piece = start === 0 ? raw : "##" + raw;
        fragmentCounts.set(piece, (fragmentCounts.get(piece) ?? 0) + 1);
      }
    }
  }
  const ranked = [...fragmentCounts.entries()]
    .filter(([, count]) => count >= 2)
    .sort(([pa, ca], [pb, cb]) => {
      const sa = ca * (pa.replace("##", "").length - 1);
      const sb = cb * (pb.replace("##", "").length - 1);
      return sb - sa || (pa < pb ? -1 : 1);
    })
    .map(([piece]) => piece);
  const pieces = [UNK, ...[...charPieces].sort()];
  for (const piece of ranked) {
    if (pieces.length >= maxSize) break;
    if (!charPieces.has(piece)) pieces.push(piece);
  }
  return new Tokenizer(pieces);
}
