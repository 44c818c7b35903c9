"""Regenerates the small offline fixture corpus under fixtures/.

The records follow the public HumanEval-X / MBXP / CodeContests field layouts
so the loaders can be exercised without the real datasets.
"""
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

JAVA_HEADER = "import java.util.*;\nimport java.lang.*;\n\nclass Solution {\n"


def java_test(calls):
    body = ",\n                ".join(calls)
    return (
        "public class Main {\n"
        "    public static void main(String[] args) {\n"
        "        Solution s = new Solution();\n"
        "        List<Boolean> correct = Arrays.asList(\n"
        f"                {body}\n"
        "        );\n"
        "        if (correct.contains(false)) {\n"
        "            throw new AssertionError();\n"
        "        }\n"
        "    }\n"
        "}\n"
    )


# (number, signature, doc, body, test calls)
JAVA = [
    (0, "public boolean hasCloseElements(List<Double> numbers, double threshold)",
     "Check if in given list of numbers, are any two numbers closer to each other than\n    given threshold.",
     """        for (int i = 0; i < numbers.size(); i++) {
            for (int j = i + 1; j < numbers.size(); j++) {
                double distance = Math.abs(numbers.get(i) - numbers.get(j));
                if (distance < threshold) return true;
            }
        }
        return false;
""",
     ["s.hasCloseElements(new ArrayList<>(Arrays.asList(1.0, 2.0, 3.9, 4.0, 5.0, 2.2)), 0.3)",
      "!s.hasCloseElements(new ArrayList<>(Arrays.asList(1.0, 2.0, 3.9, 4.0, 5.0, 2.2)), 0.05)",
      "s.hasCloseElements(new ArrayList<>(Arrays.asList(1.0, 2.0, 5.9, 4.0, 5.0)), 0.95)",
      "!s.hasCloseElements(new ArrayList<>(Arrays.asList(1.0, 2.0, 5.9, 4.0, 5.0)), 0.8)",
      "s.hasCloseElements(new ArrayList<>(Arrays.asList(1.1, 2.2, 3.1, 4.1, 5.1)), 1.0)",
      "!s.hasCloseElements(new ArrayList<>(Arrays.asList(1.1, 2.2, 3.1, 4.1, 5.1)), 0.5)"]),
    (2, "public double truncateNumber(double number)",
     "Given a positive floating point number, return its decimal part.",
     "        return number % 1.0;\n",
     ["s.truncateNumber(3.5) == 0.5",
      "Math.abs(s.truncateNumber(1.33) - 0.33) < 1e-6",
      "Math.abs(s.truncateNumber(123.456) - 0.456) < 1e-6"]),
    (3, "public boolean belowZero(List<Integer> operations)",
     "Detect if at any point the balance of the account falls below zero.",
     """        int balance = 0;

        for (int op : operations) {
            balance += op;
            if (balance < 0) {
                return true;
            }
        }

        return false;
""",
     ["!s.belowZero(new ArrayList<>(Arrays.asList()))",
      "!s.belowZero(new ArrayList<>(Arrays.asList(1, 2, -3, 1, 2, -3)))",
      "s.belowZero(new ArrayList<>(Arrays.asList(1, 2, -4, 5, 6)))",
      "!s.belowZero(new ArrayList<>(Arrays.asList(1, -1, 2, -2, 5, -5, 4, -4)))",
      "s.belowZero(new ArrayList<>(Arrays.asList(1, -1, 2, -2, 5, -5, 4, -5)))",
      "s.belowZero(new ArrayList<>(Arrays.asList(1, -2, 2, -2, 5, -5, 4, -4)))"]),
    (4, "public double meanAbsoluteDeviation(List<Double> numbers)",
     "For a given list of input numbers, calculate Mean Absolute Deviation\n    around the mean of this dataset.",
     """        double sum = 0.0;
        for (double num : numbers) {
            sum += num;
        }
        double mean = sum / numbers.size();
        double sum_abs_diff = 0.0;
        for (double num : numbers) {
            sum_abs_diff += Math.abs(num - mean);
        }
        return sum_abs_diff / numbers.size();
""",
     ["Math.abs(s.meanAbsoluteDeviation(new ArrayList<>(Arrays.asList(1.0, 2.0, 3.0))) - 2.0 / 3.0) < 1e-6",
      "Math.abs(s.meanAbsoluteDeviation(new ArrayList<>(Arrays.asList(1.0, 2.0, 3.0, 4.0))) - 1.0) < 1e-6",
      "Math.abs(s.meanAbsoluteDeviation(new ArrayList<>(Arrays.asList(1.0, 2.0, 3.0, 4.0, 5.0))) - 6.0 / 5.0) < 1e-6"]),
    (13, "public int greatestCommonDivisor(int a, int b)",
     "Return a greatest common divisor of two integers a and b",
     """        while (b != 0) {
            int t = b;
            b = a % b;
            a = t;
        }
        return a;
""",
     ["s.greatestCommonDivisor(3, 7) == 1",
      "s.greatestCommonDivisor(10, 15) == 5",
      "s.greatestCommonDivisor(49, 14) == 7",
      "s.greatestCommonDivisor(144, 60) == 12"]),
    (16, "public int countDistinctCharacters(String string)",
     "Given a string, find out how many distinct characters (regardless of case) does it consist of",
     """        Set<Character> set = new HashSet<>();
        for (char c : string.toLowerCase().toCharArray()) {
            set.add(c);
        }
        return set.size();
""",
     ["s.countDistinctCharacters(\"\") == 0",
      "s.countDistinctCharacters(\"abcde\") == 5",
      "s.countDistinctCharacters(\"abcde\" + \"cade\" + \"CADE\") == 5",
      "s.countDistinctCharacters(\"aaaaAAAAaaaa\") == 1",
      "s.countDistinctCharacters(\"Jerry jERRY JeRRRY\") == 5"]),
    (23, "public int strlen(String string)",
     "Return length of given string",
     "        return string.length();\n",
     ["s.strlen(\"\") == 0", "s.strlen(\"x\") == 1", "s.strlen(\"asdasnakj\") == 9"]),
    (24, "public int largestDivisor(int n)",
     "For a given number n, find the largest number that divides n evenly, smaller than n",
     """        for (int i = n - 1; i > 0; i--) {
            if (n % i == 0) {
                return i;
            }
        }
        return 1;
""",
     ["s.largestDivisor(3) == 1", "s.largestDivisor(7) == 1", "s.largestDivisor(10) == 5",
      "s.largestDivisor(100) == 50", "s.largestDivisor(49) == 7"]),
    (31, "public boolean isPrime(int n)",
     "Return true if a given number is prime, and false otherwise.",
     """        if (n < 2) {
            return false;
        }
        for (int k = 2; k < n; k++) {
            if (n % k == 0) {
                return false;
            }
        }
        return true;
""",
     ["!s.isPrime(6)", "s.isPrime(101)", "s.isPrime(11)", "s.isPrime(13441)", "s.isPrime(61)",
      "!s.isPrime(4)", "!s.isPrime(1)", "s.isPrime(5)", "s.isPrime(11)", "s.isPrime(17)",
      "!s.isPrime(5 * 17)", "!s.isPrime(11 * 7)", "!s.isPrime(13441 * 19)"]),
    (35, "public int maxElement(List<Integer> l)",
     "Return maximum element in the list.",
     """        int m = l.get(0);
        for (int e : l) {
            if (e > m) {
                m = e;
            }
        }
        return m;
""",
     ["s.maxElement(new ArrayList<>(Arrays.asList(1, 2, 3))) == 3",
      "s.maxElement(new ArrayList<>(Arrays.asList(5, 3, -5, 2, -3, 3, 9, 0, 124, 1, -10))) == 124"]),
    (36, "public int fizzBuzz(int n)",
     "Return the number of times the digit 7 appears in integers less than n which are divisible by 11 or 13.",
     """        int result = 0;
        for (int i = 1; i < n; i++) {
            if (i % 11 == 0 || i % 13 == 0) {
                char[] digits = String.valueOf(i).toCharArray();
                for (int j = 0; j < digits.length; j++) {
                    if (digits[j] == '7') {
                        result += 1;
                    }
                }
            }
        }
        return result;
""",
     ["s.fizzBuzz(50) == 0", "s.fizzBuzz(78) == 2", "s.fizzBuzz(79) == 3", "s.fizzBuzz(100) == 3",
      "s.fizzBuzz(200) == 6", "s.fizzBuzz(4000) == 192", "s.fizzBuzz(10000) == 639", "s.fizzBuzz(100000) == 8026"]),
    (46, "public int fib4(int n)",
     "The Fib4 number sequence: fib4(n) = fib4(n-1) + fib4(n-2) + fib4(n-3) + fib4(n-4).",
     """        List<Integer> results = new ArrayList<>();
        results.add(0);
        results.add(0);
        results.add(2);
        results.add(0);
        if (n < 4) {
            return results.get(n);
        }

        for (int i = 4; i <= n; i++) {
            results.add(results.get(0) + results.get(1) + results.get(2) + results.get(3));
            results.remove(0);
        }
        return results.get(3);
""",
     ["s.fib4(5) == 4", "s.fib4(8) == 28", "s.fib4(10) == 104", "s.fib4(12) == 386"]),
    (50, "public String decodeShift(String s)",
     "takes as input string encoded with encode_shift function. Returns decoded string.",
     """        StringBuilder sb = new StringBuilder();
        for (char ch : s.toCharArray()) {
            sb.append((char) ('a' + ((ch + 21 - 'a') % 26)));
        }
        return sb.toString();
""",
     None),
    (52, "public boolean belowThreshold(List<Integer> l, int t)",
     "Return True if all numbers in the list l are below threshold t.",
     """        boolean ok = true;
        for (int e : l) {
            if (e >= t) {
                ok = false;
            }
        }
        return ok;
""",
     ["s.belowThreshold(new ArrayList<>(Arrays.asList(1, 2, 4, 10)), 100)",
      "!s.belowThreshold(new ArrayList<>(Arrays.asList(1, 20, 4, 10)), 5)",
      "s.belowThreshold(new ArrayList<>(Arrays.asList(1, 20, 4, 10)), 21)",
      "s.belowThreshold(new ArrayList<>(Arrays.asList(1, 20, 4, 10)), 22)",
      "s.belowThreshold(new ArrayList<>(Arrays.asList(1, 8, 4, 10)), 11)",
      "!s.belowThreshold(new ArrayList<>(Arrays.asList(1, 8, 4, 10)), 10)"]),
    (55, "public int fib(int n)",
     "Return n-th Fibonacci number.",
     """        if (n == 0) {
            return 0;
        }
        int a = 0, b = 1;
        int i = 1;
        while (i < n) {
            int c = a + b;
            a = b;
            b = c;
            i++;
        }
        return b;
""",
     ["s.fib(10) == 55", "s.fib(1) == 1", "s.fib(8) == 21", "s.fib(11) == 89", "s.fib(12) == 144"]),
    (60, "public int sumToN(int n)",
     "sum_to_n is a function that sums numbers from 1 to n.",
     """        int sum = 0;
        for (int i = 1; i <= n; i++) {
            sum += i;
        }
        return sum;
""",
     ["s.sumToN(1) == 1", "s.sumToN(6) == 21", "s.sumToN(11) == 66", "s.sumToN(30) == 465", "s.sumToN(100) == 5050"]),
    (78, "public int hexKey(String num)",
     "Count the number of hexadecimal digits that are primes.",
     """        int total = 0;
        for (char c : num.toCharArray()) {
            switch (c) {
                case '2':
                case '3':
                case '5':
                case '7':
                case 'B':
                case 'D':
                    total += 1;
                    break;
                default:
                    break;
            }
        }
        return total;
""",
     ["s.hexKey(\"AB\") == 1", "s.hexKey(\"1077E\") == 2", "s.hexKey(\"ABED1A33\") == 4",
      "s.hexKey(\"2020\") == 2", "s.hexKey(\"123456789ABCDEF0\") == 6", "s.hexKey(\"112233445566778899AABBCCDDEEFF00\") == 12",
      "s.hexKey(\"\") == 0"]),
    (105, "public String digitName(int d)",
     "Return the English name of a digit between 1 and 3, or \"Other\".",
     """        String name;
        switch (d) {
            case 1:
                name = "One";
                break;
            case 2:
                name = "Two";
                break;
            case 3:
                name = "Three";
                break;
            default:
                name = "Other";
                break;
        }
        return name;
""",
     ["s.digitName(1).equals(\"One\")", "s.digitName(2).equals(\"Two\")",
      "s.digitName(3).equals(\"Three\")", "s.digitName(7).equals(\"Other\")"]),
    (150, "public int xOrY(int n, int x, int y)",
     "Return the value of x if n is a prime number and should return the value of y otherwise.",
     """        if (n == 1) {
            return y;
        }
        for (int i = 2; i < n; i++) {
            if (n % i == 0) {
                return y;
            }
        }
        return x;
""",
     ["s.xOrY(7, 34, 12) == 34", "s.xOrY(15, 8, 5) == 5", "s.xOrY(3, 33, 5212) == 33",
      "s.xOrY(1259, 3, 52) == 3", "s.xOrY(7919, -1, 12) == -1", "s.xOrY(3609, 1245, 583) == 583",
      "s.xOrY(91, 56, 129) == 129", "s.xOrY(6, 34, 1234) == 1234", "s.xOrY(1, 2, 0) == 0", "s.xOrY(2, 2, 0) == 2"]),
    (157, "public boolean rightAngleTriangle(int a, int b, int c)",
     "Return true if the three sides form a right-angled triangle, false otherwise.",
     "        return a * a == b * b + c * c || b * b == a * a + c * c || c * c == a * a + b * b;\n",
     ["s.rightAngleTriangle(3, 4, 5)", "!s.rightAngleTriangle(1, 2, 3)", "s.rightAngleTriangle(10, 6, 8)",
      "!s.rightAngleTriangle(2, 2, 2)", "s.rightAngleTriangle(7, 24, 25)", "!s.rightAngleTriangle(10, 5, 7)"]),
    (159, "public List<Integer> eat(int number, int need, int remaining)",
     "Return an array of [ total number of eaten carrots after your meals, the number of carrots left after your meals ]",
     """        if (need <= remaining) {
            return Arrays.asList(number + need, remaining - need);
        } else {
            return Arrays.asList(number + remaining, 0);
        }
""",
     ["s.eat(5, 6, 10).equals(Arrays.asList(11, 4))", "s.eat(4, 8, 9).equals(Arrays.asList(12, 1))",
      "s.eat(1, 10, 10).equals(Arrays.asList(11, 0))", "s.eat(2, 11, 5).equals(Arrays.asList(7, 0))",
      "s.eat(4, 5, 7).equals(Arrays.asList(9, 2))", "s.eat(4, 5, 1).equals(Arrays.asList(5, 0))"]),
    (161, "public int signCount(List<Integer> xs)",
     "Return the number of strictly positive values minus the number of strictly negative values.",
     """        int count = 0;
        int idx = 0;
        while (idx < xs.size()) {
            int v = xs.get(idx);
            if (v > 0) {
                count++;
            } else if (v < 0) {
                count--;
            }
            idx++;
        }
        return count;
""",
     ["s.signCount(new ArrayList<>(Arrays.asList(1, -2, 3))) == 1",
      "s.signCount(new ArrayList<>(Arrays.asList(-1, -2, 0))) == -2",
      "s.signCount(new ArrayList<>(Arrays.asList())) == 0",
      "s.signCount(new ArrayList<>(Arrays.asList(0, 0, 5))) == 1"]),
]

# Records the filter must reject: a helper-method task and a broken one.
JAVA_REJECT = [
    (10, """import java.util.*;
import java.lang.*;

class Solution {
    public boolean isPalindrome(String string) {
        int i = 0;
        int j = string.length() - 1;
        while (i < j) {
            if (string.charAt(i)!= string.charAt(j)) {
                return false;
            }
            i++;
            j--;
        }
        return true;
    }
    public String makePalindrome(String string) {
""", """        if (string.length() == 0) {
            return "";
        }
        int beginning_of_suffix = 0;
        while (!isPalindrome(string.substring(beginning_of_suffix))) {
            beginning_of_suffix++;
        }
        return string + new StringBuffer(string.substring(0, beginning_of_suffix)).reverse().toString();
    }
}""", ["s.makePalindrome(\"\").equals(\"\")", "s.makePalindrome(\"x\").equals(\"x\")"]),
    (7, JAVA_HEADER + "    public List<String> filterBySubstring(List<String> strings, String substring) {\n",
     """        List<String> result = new ArrayList<>();
        for (String x : strings) {
            if (x.contains(substring) {
                result.add(x);
            }
        }
        return result;
    }
}""", ["s.filterBySubstring(new ArrayList<>(), \"john\").equals(Arrays.asList())"]),
]


def java_records():
    out = []
    for num, sig, doc, body, calls in JAVA:
        declaration = JAVA_HEADER + f"    {sig} {{\n"
        prompt = JAVA_HEADER + f"    /**\n    {doc}\n     */\n    {sig} {{\n"
        out.append({
            "task_id": f"Java/{num}",
            "prompt": prompt,
            "declaration": declaration,
            "canonical_solution": body + "    }\n}",
            "test": java_test(calls) if calls else "",
            "example_test": "",
        })
    for num, declaration, solution, calls in JAVA_REJECT:
        out.append({
            "task_id": f"Java/{num}",
            "prompt": declaration,
            "declaration": declaration,
            "canonical_solution": solution,
            "test": java_test(calls),
            "example_test": "",
        })
    out.sort(key=lambda r: int(r["task_id"].split("/")[1]))
    return out


PY = [
    (0, "from typing import List\n\n\ndef has_close_elements(numbers: List[float], threshold: float) -> bool:\n",
     """    for idx, elem in enumerate(numbers):
        for idx2, elem2 in enumerate(numbers):
            if idx != idx2:
                distance = abs(elem - elem2)
                if distance < threshold:
                    return True

    return False
""", "has_close_elements", """

METADATA = {
    'author': 'jt',
    'dataset': 'test'
}


def check(has_close_elements):
    assert has_close_elements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.3) == True
    assert has_close_elements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.05) == False
    assert has_close_elements([1.0, 2.0, 5.9, 4.0, 5.0], 0.95) == True
    assert has_close_elements([1.0, 2.0, 5.9, 4.0, 5.0], 0.8) == False

check(has_close_elements)
"""),
    (13, "\n\ndef greatest_common_divisor(a: int, b: int) -> int:\n",
     "    while b:\n        a, b = b, a % b\n    return a\n", "greatest_common_divisor", """

def check(greatest_common_divisor):
    assert greatest_common_divisor(3, 7) == 1
    assert greatest_common_divisor(10, 15) == 5
    assert greatest_common_divisor(49, 14) == 7
    assert greatest_common_divisor(144, 60) == 12

check(greatest_common_divisor)
"""),
    (31, "\n\ndef is_prime(n):\n",
     "    if n < 2:\n        return False\n    for k in range(2, n - 1):\n        if n % k == 0:\n            return False\n    return True\n",
     "is_prime", """

def check(is_prime):
    assert is_prime(6) == False
    assert is_prime(101) == True
    assert is_prime(11) == True
    assert is_prime(13441) == True
    assert is_prime(4) == False
    assert is_prime(1) == False

check(is_prime)
"""),
    (60, "\n\ndef sum_to_n(n: int):\n", "    return sum(range(n + 1))\n", "sum_to_n", """

def check(sum_to_n):
    assert sum_to_n(1) == 1
    assert sum_to_n(6) == 21
    assert sum_to_n(11) == 66
    assert sum_to_n(30) == 465
    assert sum_to_n(100) == 5050

check(sum_to_n)
"""),
]

JS = [
    (0, "const hasCloseElements = (numbers, threshold) => {\n",
     """  for (let i = 0; i < numbers.length; i++) {
    for (let j = 0; j < numbers.length; j++) {
      if (i != j) {
        let distance = Math.abs(numbers[i] - numbers[j]);
        if (distance < threshold) {
          return true;
        }
      }
    }
  }
  return false;
}

""", "hasCloseElements", """const testHasCloseElements = () => {
  console.assert(hasCloseElements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.3) === true)
  console.assert(hasCloseElements([1.0, 2.0, 3.9, 4.0, 5.0, 2.2], 0.05) === false)
  console.assert(hasCloseElements([1.0, 2.0, 5.9, 4.0, 5.0], 0.95) === true)
}

testHasCloseElements()
"""),
    (60, "const sumToN = (n) => {\n", "  return n * (n + 1) / 2;\n}\n\n", "sumToN", """const testSumToN = () => {
  console.assert(sumToN(1) === 1)
  console.assert(sumToN(6) === 21)
  console.assert(sumToN(100) === 5050)
}

testSumToN()
"""),
]


def py_records():
    return [{
        "task_id": f"Python/{n}", "prompt": decl, "declaration": decl,
        "canonical_solution": body, "test": test, "example_test": "",
    } for n, decl, body, _ep, test in PY]


def js_records():
    return [{
        "task_id": f"JavaScript/{n}", "prompt": decl, "declaration": decl,
        "canonical_solution": body, "test": test, "example_test": "",
    } for n, decl, body, _ep, test in JS]


MBXP = [
    {
        "task_id": "MBJP/3",
        "language": "java",
        "prompt": "import java.io.*;\nimport java.lang.*;\nimport java.util.*;\nimport java.math.*;\n\n\nclass IsNotPrime {\n    /**\n     * * Write a Java function to identify non-prime numbers.\n     */\n    public static Boolean isNotPrime(int n) {\n",
        "canonical_solution": "        boolean result = false;\n        for (int i = 2; i * i <= n; i++) {\n            if (n % i == 0) {\n                result = true;\n            }\n        }\n        return result;\n    }\n}",
        "test": "\nclass Main {\n    public static void main(String[] args) throws Exception {\n        Boolean x0 = IsNotPrime.isNotPrime(2);\n        if (!(compare(x0, false))) {\n            throw new java.lang.Exception(\"Exception -- test case 0 did not pass. x0 = \" + x0);\n        }\n\n        Boolean x1 = IsNotPrime.isNotPrime(10);\n        if (!(compare(x1, true))) {\n            throw new java.lang.Exception(\"Exception -- test case 1 did not pass. x1 = \" + x1);\n        }\n    }\n\n    public static boolean compare(Object obj1, Object obj2) {\n        if (obj1 == null && obj2 == null) {\n            return true;\n        } else if (obj1 == null || obj2 == null) {\n            return false;\n        } else {\n            return obj1.equals(obj2);\n        }\n    }\n}\n",
        "entry_point": "isNotPrime",
        "description": "Write a Java function to identify non-prime numbers.",
    },
    {
        "task_id": "MBJP/17",
        "language": "java",
        "prompt": "import java.io.*;\nimport java.lang.*;\nimport java.util.*;\nimport java.math.*;\n\n\nclass SquarePerimeter {\n    /**\n     * * Write a function to find the perimeter of a square.\n     */\n    public static int squarePerimeter(int a) {\n",
        "canonical_solution": "        int perimeter = 4 * a;\n        return perimeter;\n    }\n}",
        "test": "\nclass Main {\n    public static void main(String[] args) throws Exception {\n        int x0 = SquarePerimeter.squarePerimeter(10);\n        if (!(compare(x0, 40))) {\n            throw new java.lang.Exception(\"Exception -- test case 0 did not pass. x0 = \" + x0);\n        }\n    }\n\n    public static boolean compare(Object obj1, Object obj2) {\n        return obj1.equals(obj2);\n    }\n}\n",
        "entry_point": "squarePerimeter",
        "description": "Write a function to find the perimeter of a square.",
    },
]

MATHQA = [
    {
        "task_id": "MathQA/0",
        "language": "java",
        "prompt": "import java.io.*;\nimport java.lang.*;\nimport java.util.*;\nimport java.math.*;\n\n\nclass Problem {\n    /**\n     * the banker ' s gain of a certain sum due 3 years hence at 10 % per annum is rs . 36 . what is the present worth ?\n     */\n    public static double problem() {\n",
        "canonical_solution": "        double n0 = 3.0;\n        double n1 = 10.0;\n        double n2 = 36.0;\n        double t0 = n2 * 100.0;\n        double t1 = n0 * n1;\n        double t2 = t0 / t1;\n        double t3 = t2 * 100.0;\n        double answer = t3 / t1;\n        return answer;\n    }\n}",
        "test": "\nclass Main {\n    public static void main(String[] args) throws Exception {\n        double x0 = Problem.problem();\n        if (!(Math.abs(x0 - 400.0) < 1e-6)) {\n            throw new java.lang.Exception(\"Exception -- test case 0 did not pass. x0 = \" + x0);\n        }\n    }\n}\n",
        "entry_point": "problem",
        "description": "the banker ' s gain of a certain sum due 3 years hence at 10 % per annum is rs . 36 . what is the present worth ?",
    },
]


def contest_records():
    io = lambda ins, outs: {"input": ins, "output": outs}
    sum_ok_1 = "a, b = map(int, input().split())\nprint(a + b)\n"
    sum_ok_2 = "import sys\nx = sys.stdin.read().split()\nprint(int(x[0]) + int(x[1]))\n"
    sum_bad = "a, b = map(int, input().split())\nprint(a - b)\n"
    sum_bad_2 = "a, b = map(int, input().split())\nprint(a * b)\n"
    big = "# " + "padding " * 80 + "\nprint(0)\n"
    max_ok_1 = "n = int(input())\nxs = list(map(int, input().split()))\nprint(max(xs))\n"
    max_ok_2 = "n = int(input())\nxs = list(map(int, input().split()))\nbest = xs[0]\nfor v in xs:\n    if v > best:\n        best = v\nprint(best)\n"
    max_bad = "n = int(input())\nxs = list(map(int, input().split()))\nprint(xs[0])\n"
    java_ok = "import java.util.*;\npublic class Main {\n    public static void main(String[] args) {\n        Scanner sc = new Scanner(System.in);\n        int n = sc.nextInt();\n        System.out.println(n * 2);\n    }\n}\n"
    return [
        {
            "name": "1000_A. Sum",
            "description": "Print the sum of two integers.",
            "public_tests": io(["1 2\n"], ["3\n"]),
            "private_tests": io(["5 7\n", "10 -3\n"], ["12\n", "7\n"]),
            "generated_tests": io(["2 2\n"], ["4\n"]),
            "solutions": {"language": [3, 3, 3, 2], "solution": [sum_ok_1, sum_ok_2, sum_ok_1, "int main(){}"]},
            "incorrect_solutions": {"language": [3, 3], "solution": [sum_bad, sum_bad_2]},
        },
        {
            "name": "1001_B. Maximum",
            "description": "Print the maximum of n integers.",
            "public_tests": io(["3\n1 5 2\n"], ["5\n"]),
            "private_tests": io(["4\n-1 -5 -2 -9\n"], ["-1\n"]),
            "generated_tests": io(["1\n7\n"], ["7\n"]),
            "solutions": {"language": [3, 3], "solution": [max_ok_1, max_ok_2]},
            "incorrect_solutions": {"language": [3], "solution": [max_bad]},
        },
        {
            "name": "1002_C. Long",
            "description": "Every solution is too long.",
            "public_tests": io(["\n"], ["0\n"]),
            "private_tests": io([], []),
            "generated_tests": io([], []),
            "solutions": {"language": [3, 3], "solution": [big, big + "\n"]},
            "incorrect_solutions": {"language": [], "solution": []},
        },
        {
            "name": "1003_D. Double",
            "description": "Print twice n.",
            "public_tests": io(["4\n"], ["8\n"]),
            "private_tests": io(["0\n"], ["0\n"]),
            "generated_tests": io([], []),
            "solutions": {"language": [4], "solution": [java_ok]},
            "incorrect_solutions": {"language": [], "solution": []},
        },
    ]


def write(path, records):
    full = os.path.join(HERE, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    write("humaneval-x/java.jsonl", java_records())
    write("humaneval-x/python.jsonl", py_records())
    write("humaneval-x/js.jsonl", js_records())
    write("mbxp/java.jsonl", MBXP)
    write("mathqa/java.jsonl", MATHQA)
    write("codecontests/test.jsonl", contest_records())
