import { describe, expect, it } from "vitest";

import { Tokenizer, induceVocab, isPunctuation } from "../src/tokenizer.js";

describe("tokenizer", () => {
  it("greedy longest match with continuations", () => {
    const tok = new Tokenizer(["[UNK]", "ab", "##cd", "a", "b", "##c", "##d"]);
    expect(tok.encodeWord("abcd").map((i) => tok.decodePiece(i))).toEqual(["ab", "##cd"]);
  });

  it("unknown characters become [UNK] and never fail", () => {
    const tok = new Tokenizer(["[UNK]", "a", "##a"]);
    const ids = tok.encodeWord("axa");
    expect(ids).toHaveLength(3);
    expect(tok.decodePiece(ids[1])).toBe("[UNK]");
  });

  it("induced vocab covers every corpus word without [UNK]", () => {
    const tok = induceVocab(["mata", "mali", "gore", "more"], 64);
    for (const word of ["mata", "mali", "gore", "more"]) {
      const ids = tok.encodeWord(word);
      expect(ids.every((i) => tok.decodePiece(i) !== "[UNK]")).toBe(true);
    }
    // coverage is positional: a character never seen word-initially falls
    // back to [UNK] in that position but still encodes
    expect(tok.encodeWord("tamali").length).toBeGreaterThan(0);
  });

  it("vocab roundtrips through JSON", () => {
    const tok = induceVocab(["mata", "mali"], 32);
    const again = Tokenizer.fromJSON(JSON.parse(JSON.stringify(tok.toJSON())));
    expect(again.encodeWord("mata")).toEqual(tok.encodeWord("mata"));
  });

  it("punctuation detection", () => {
    expect(isPunctuation(".")).toBe(true);
    expect(isPunctuation("?!")).toBe(true);
    expect(isPunctuation("--")).toBe(true);
    expect(isPunctuation("word")).toBe(false);
    expect(isPunctuation("слово")).toBe(false);
  });
});
