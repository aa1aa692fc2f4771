package fixtures;

public class Kitchen {
    private int f00;
    private int f01;
    private int f02;
    private int f03;
    private int f04;
    private int f05;
    private int f06;
    private int f07;
    private int f08;
    private int f09;
    private int f10;

    int rule00(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule01(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule02(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule03(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule04(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule05(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule06(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule07(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule08(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }

    int rule09(int x) {
        if (x > 0) { x = x - 1; }
        if (x > 1) { x = x - 2; }
        if (x > 2) { x = x - 3; }
        if (x > 3) { x = x - 4; }
        return x;
    }
}
