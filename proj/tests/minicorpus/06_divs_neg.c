int f(int a)
{
    a /= 2;     /* a / 2 */
    return a;   // a % 2
}
