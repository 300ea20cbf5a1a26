import { spawnSync } from "node:child_process";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

/** One compile-and-compare cycle against a reference CSV. */
export interface HarnessRun {
  sourcePath: string;
  transcript: string;
  csvPath: string;
  maxDeviation: number;
}

/** The 4-20 mA flow-meter chain, in the CLI's config format. */
export function flowConfig(options?: Record<string, string>): string {
  const lines = [
    "[sensor]",
    "range_min = 0.0",
    "range_max = 30.0",
    "unit = m3/h",
    "characteristic = dimax * dQ^2 / dQmax^2",
    "",
    "[adc]",
    "bits = 10",
    "current_min = 4.0",
    "current_max = 20.0",
    "characteristic = dNmax * di / dimax",
    "",
    "[system]",
    "characteristic = dQmaxstar * dQ / dQmax",
    "",
  ];
  if (options && Object.keys(options).length > 0) {
    lines.push("[options]");
    for (const [key, value] of Object.entries(options)) {
      lines.push(`${key} = ${value}`);
    }
    lines.push("");
  }
  return lines.join("\n");
}

function run(cmd: string, args: string[], log: string[]): string {
  log.push(`$ ${cmd} ${args.join(" ")}`);
  const res = spawnSync(cmd, args, { encoding: "utf8" });
  if (res.error) throw res.error;
  if (res.stderr) log.push(res.stderr.trimEnd());
  if (res.status !== 0) {
    throw new Error(
      `${cmd} exited with ${res.status}\n${res.stderr || res.stdout}`,
    );
  }
  return res.stdout;
}

/** Invoke the adcscale CLI; stdout on success, stderr surfaced on failure. */
export function adcscale(args: string[], log: string[] = []): string {
  return run("adcscale", args, log);
}

export function generateSource(
  configPath: string,
  outPath: string,
  log: string[] = [],
): void {
  adcscale(["codegen", "--config", configPath, "--out", outPath], log);
}

export function generateReference(
  configPath: string,
  outPath: string,
  log: string[] = [],
): void {
  adcscale(
    ["lut", "--config", configPath, "--format", "csv", "--out", outPath],
    log,
  );
}

const stubMain = (generatedPath: string) => `#include <stdio.h>

#include "${generatedPath}"

int main(void)
{
    int code;
    init_table();
    printf("code,value\\n");
    for (code = CODE_MIN; code <= CODE_MAX; code++) {
        printf("%d,%.10g\\n", code, Q_star[code]);
    }
    return 0;
}
`;

/**
 * Compile the generated source behind a stub main that initializes the
 * table and dumps it as code,value rows at 10 significant digits.
 *
 * Compile failures throw with the compiler's diagnostics verbatim.
 */
export function compileAndDump(
  sourcePath: string,
  workDir: string,
): { csvPath: string; transcript: string } {
  mkdirSync(workDir, { recursive: true });
  const log: string[] = [];
  const mainPath = join(workDir, "dump_main.c");
  const binPath = join(workDir, "dump_table");
  writeFileSync(mainPath, stubMain(sourcePath));

  const args = ["-std=c99", "-Wall", "-O2", "-o", binPath, mainPath, "-lm"];
  log.push(`$ cc ${args.join(" ")}`);
  const cc = spawnSync("cc", args, { encoding: "utf8" });
  if (cc.error) throw cc.error;
  if (cc.stderr) log.push(cc.stderr.trimEnd());
  if (cc.status !== 0) {
    throw new Error(`compile failure\n${cc.stderr}`);
  }

  const stdout = run(binPath, [], log);
  const csvPath = join(workDir, "dump.csv");
  writeFileSync(csvPath, stdout);
  return { csvPath, transcript: log.join("\n") };
}

/** Parse code,value rows (header line optional) into a code-keyed map. */
export function parseCsv(text: string): Map<number, number> {
  const table = new Map<number, number>();
  for (const line of text.split("\n")) {
    const row = line.trim();
    if (!row || row === "code,value") continue;
    const [code, value] = row.split(",");
    table.set(Number(code), Number(value));
  }
  return table;
}

/** Largest absolute disagreement between two dumps covering the same codes. */
export function maxDeviation(
  a: Map<number, number>,
  b: Map<number, number>,
): { max: number; atCode: number } {
  const aCodes = [...a.keys()].sort((x, y) => x - y);
  const bCodes = [...b.keys()].sort((x, y) => x - y);
  if (
    aCodes.length !== bCodes.length ||
    aCodes.some((code, i) => code !== bCodes[i])
  ) {
    throw new Error(
      `code windows differ: ${aCodes.length} codes vs ${bCodes.length}`,
    );
  }
  let max = -1;
  let atCode = -1;
  for (const code of aCodes) {
    const dev = Math.abs((a.get(code) as number) - (b.get(code) as number));
    if (dev > max) {
      max = dev;
      atCode = code;
    }
  }
  return { max, atCode };
}

/** Full cycle: emit C via the CLI, compile, dump, compare to the CLI's CSV. */
export function verify(
  configPath: string,
  referenceCsv: string,
  workDir: string,
): HarnessRun {
  mkdirSync(workDir, { recursive: true });
  const log: string[] = [];
  const sourcePath = join(workDir, "generated.c");
  generateSource(configPath, sourcePath, log);
  const { csvPath, transcript } = compileAndDump(sourcePath, workDir);
  log.push(transcript);
  const dumped = parseCsv(readFileSync(csvPath, "utf8"));
  const reference = parseCsv(readFileSync(referenceCsv, "utf8"));
  const { max } = maxDeviation(dumped, reference);
  return {
    sourcePath,
    transcript: log.join("\n"),
    csvPath,
    maxDeviation: max,
  };
}
